#include "naive_features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace oracle {

namespace {

struct Off {
    int dx, dy, dz;
};

std::vector<Off> neighbors(bool threeD) {
    std::vector<Off> out;
    for (int dz = threeD ? -1 : 0; dz <= (threeD ? 1 : 0); ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx != 0 || dy != 0 || dz != 0) {
                    out.push_back({dx, dy, dz});
                }
            }
        }
    }
    return out;
}

// One representative of each +/- pair.
std::vector<Off> half_directions(bool threeD) {
    std::vector<Off> out;
    for (const auto& o : neighbors(threeD)) {
        if (o.dz > 0 || (o.dz == 0 && o.dy > 0) || (o.dz == 0 && o.dy == 0 && o.dx > 0)) {
            out.push_back(o);
        }
    }
    return out;
}

double xlog2x(double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;
}

} // namespace

std::vector<int> naive_levels(const Roi& roi, int ng) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < roi.inside.size(); ++i) {
        if (roi.inside[i]) {
            lo = std::min(lo, roi.intensity[i]);
            hi = std::max(hi, roi.intensity[i]);
        }
    }
    std::vector<int> level(roi.inside.size(), 0);
    for (std::size_t i = 0; i < roi.inside.size(); ++i) {
        if (!roi.inside[i]) {
            continue;
        }
        if (hi == lo) {
            level[i] = 1;
        } else {
            const int l = 1 + static_cast<int>(std::floor(ng * (roi.intensity[i] - lo) / (hi - lo)));
            level[i] = l > ng ? ng : l;
        }
    }
    return level;
}

std::array<double, 28> naive_features(const Roi& roi, int ng, bool threeD) {
    std::array<double, 28> f{};
    const auto level = naive_levels(roi, ng);
    const auto L = [&](int x, int y, int z) { return level[roi.idx(x, y, z)]; };

    // Histogram on raw intensities.
    std::vector<double> X;
    for (std::size_t i = 0; i < roi.inside.size(); ++i) {
        if (roi.inside[i]) {
            X.push_back(roi.intensity[i]);
        }
    }
    const double N = static_cast<double>(X.size());
    double mean = 0;
    for (double x : X) mean += x;
    mean /= N;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : X) {
        m2 += std::pow(x - mean, 2);
        m3 += std::pow(x - mean, 3);
        m4 += std::pow(x - mean, 4);
    }
    const double s2 = m2 / (N - 1);
    f[0] = mean;
    f[1] = std::sqrt(m2 / N);
    f[2] = std::sqrt(s2);
    f[3] = s2 > 0 ? (m3 / N) / std::pow(s2, 1.5) : 0.0;
    f[4] = s2 > 0 ? (m4 / N) / (s2 * s2) : 0.0;

    const auto nb = neighbors(threeD);

    // GLCM: every voxel against every neighbor offset gives both orderings of each pair.
    std::vector<std::vector<double>> P(ng + 1, std::vector<double>(ng + 1, 0.0));
    double pairs = 0;
    for (int z = 0; z < roi.nz; ++z)
        for (int y = 0; y < roi.ny; ++y)
            for (int x = 0; x < roi.nx; ++x) {
                if (!roi.in(x, y, z)) continue;
                for (const auto& o : nb) {
                    if (roi.in(x + o.dx, y + o.dy, z + o.dz)) {
                        P[L(x, y, z)][L(x + o.dx, y + o.dy, z + o.dz)] += 1;
                        pairs += 1;
                    }
                }
            }
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) P[i][j] /= pairs;

    double asmv = 0, con = 0, idm = 0, ent = 0, sij = 0;
    std::vector<double> px(ng + 1, 0), py(ng + 1, 0);
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            asmv += P[i][j] * P[i][j];
            con += (i - j) * (i - j) * P[i][j];
            idm += P[i][j] / (1.0 + (i - j) * (i - j));
            ent -= xlog2x(P[i][j]);
            sij += double(i) * j * P[i][j];
            px[i] += P[i][j];
            py[j] += P[i][j];
        }
    double mux = 0, muy = 0;
    for (int i = 1; i <= ng; ++i) {
        mux += i * px[i];
        muy += i * py[i];
    }
    double vx = 0, vy = 0, hx = 0, hy = 0;
    for (int i = 1; i <= ng; ++i) {
        vx += (i - mux) * (i - mux) * px[i];
        vy += (i - muy) * (i - muy) * py[i];
        hx -= xlog2x(px[i]);
        hy -= xlog2x(py[i]);
    }
    double var = 0, hxy1 = 0, hxy2 = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            var += (i - mux) * (i - mux) * P[i][j];
            const double q = px[i] * py[j];
            if (q > 0) {
                hxy1 -= P[i][j] * std::log2(q);
                hxy2 -= q * std::log2(q);
            }
        }
    std::map<int, double> psum, pdiff;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            psum[i + j] += P[i][j];
            pdiff[std::abs(i - j)] += P[i][j];
        }
    double sa = 0, se = 0, sv = 0, da = 0, de = 0, dv = 0;
    for (auto& [k, p] : psum) {
        sa += k * p;
        se -= xlog2x(p);
    }
    for (auto& [k, p] : psum) sv += (k - sa) * (k - sa) * p;
    for (auto& [k, p] : pdiff) {
        da += k * p;
        de -= xlog2x(p);
    }
    for (auto& [k, p] : pdiff) dv += (k - da) * (k - da) * p;
    const double sxy = std::sqrt(vx) * std::sqrt(vy);
    f[5] = asmv;
    f[6] = con;
    f[7] = sxy > 0 ? (sij - mux * muy) / sxy : 0.0;
    f[8] = var;
    f[9] = idm;
    f[10] = sa;
    f[11] = se;
    f[12] = sv;
    f[13] = ent;
    f[14] = dv;
    f[15] = de;
    const double hm = std::max(hx, hy);
    f[16] = hm > 0 ? (ent - hxy1) / hm : 0.0;
    const double r = 1.0 - std::exp(-2.0 * (hxy2 - ent));
    f[17] = std::sqrt(r > 0 ? r : 0.0);

    // Runs: start wherever the previous voxel along the direction is not a same-level ROI voxel.
    const auto dirs = half_directions(threeD);
    std::map<std::pair<int, int>, double> runs; // (level, length) -> count
    double nruns = 0;
    for (const auto& d : dirs)
        for (int z = 0; z < roi.nz; ++z)
            for (int y = 0; y < roi.ny; ++y)
                for (int x = 0; x < roi.nx; ++x) {
                    if (!roi.in(x, y, z)) continue;
                    const int l = L(x, y, z);
                    if (roi.in(x - d.dx, y - d.dy, z - d.dz) && L(x - d.dx, y - d.dy, z - d.dz) == l) continue;
                    int len = 0;
                    int cx = x, cy = y, cz = z;
                    while (roi.in(cx, cy, cz) && L(cx, cy, cz) == l) {
                        ++len;
                        cx += d.dx;
                        cy += d.dy;
                        cz += d.dz;
                    }
                    runs[{l, len}] += 1;
                    nruns += 1;
                }
    double sre = 0, lre = 0;
    std::map<int, double> byLevel, byLength;
    for (auto& [k, c] : runs) {
        const double j = k.second;
        sre += c / (j * j);
        lre += c * j * j;
        byLevel[k.first] += c;
        byLength[k.second] += c;
    }
    double gln = 0, rln = 0;
    for (auto& [k, c] : byLevel) gln += c * c;
    for (auto& [k, c] : byLength) rln += c * c;
    f[18] = sre / nruns;
    f[19] = lre / nruns;
    f[20] = gln / nruns;
    f[21] = rln / nruns;
    f[22] = nruns / (N * static_cast<double>(dirs.size()));

    // Dependence: equal-level ROI neighbors per voxel.
    double sne = 0, lne = 0;
    for (int z = 0; z < roi.nz; ++z)
        for (int y = 0; y < roi.ny; ++y)
            for (int x = 0; x < roi.nx; ++x) {
                if (!roi.in(x, y, z)) continue;
                int s = 0;
                for (const auto& o : nb) {
                    if (roi.in(x + o.dx, y + o.dy, z + o.dz) && L(x + o.dx, y + o.dy, z + o.dz) == L(x, y, z)) ++s;
                }
                sne += 1.0 / ((s + 1.0) * (s + 1.0));
                lne += (s + 1.0) * (s + 1.0);
            }
    f[23] = sne / N;
    f[24] = lne / N;

    // Tone difference.
    std::vector<double> cnt(ng + 1, 0), sdiff(ng + 1, 0);
    double contributing = 0;
    for (int z = 0; z < roi.nz; ++z)
        for (int y = 0; y < roi.ny; ++y)
            for (int x = 0; x < roi.nx; ++x) {
                if (!roi.in(x, y, z)) continue;
                double sum = 0;
                int k = 0;
                for (const auto& o : nb) {
                    if (roi.in(x + o.dx, y + o.dy, z + o.dz)) {
                        sum += L(x + o.dx, y + o.dy, z + o.dz);
                        ++k;
                    }
                }
                if (k == 0) continue;
                cnt[L(x, y, z)] += 1;
                sdiff[L(x, y, z)] += std::fabs(L(x, y, z) - sum / k);
                contributing += 1;
            }
    std::vector<double> p(ng + 1, 0);
    double ps = 0, stot = 0;
    for (int i = 1; i <= ng; ++i) {
        p[i] = cnt[i] / contributing;
        ps += p[i] * sdiff[i];
        stot += sdiff[i];
    }
    f[25] = std::min(1e6, 1.0 / (1e-12 + ps));
    double cx = 0, sn = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            if (p[i] == 0 || p[j] == 0) continue;
            cx += std::abs(i - j) / (contributing * contributing * (p[i] + p[j])) * (p[i] * sdiff[i] + p[j] * sdiff[j]);
            sn += (p[i] + p[j]) * (i - j) * (i - j);
        }
    f[26] = cx;
    f[27] = sn / (1e-12 + stot);
    return f;
}

} // namespace oracle
