#include "radcompat/core/error.hpp"
#include "radcompat/features/features.hpp"

#include <algorithm>
#include <cmath>

namespace radcompat::features {

namespace {

double plog2(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

} // namespace

Glcm build_glcm(const QuantizedRoi& q, std::span<const Offset> directions) {
    const auto ng = static_cast<std::size_t>(q.ng);
    std::vector<double> counts(ng * ng, 0.0);
    double total = 0.0;
    const auto& d = q.dims;
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const int a = q.levels[d.index(x, y, z)];
                if (a == 0) {
                    continue;
                }
                for (const auto& o : directions) {
                    const int b = q.level_at(static_cast<std::ptrdiff_t>(x) + o.dx,
                                             static_cast<std::ptrdiff_t>(y) + o.dy,
                                             static_cast<std::ptrdiff_t>(z) + o.dz);
                    if (b == 0) {
                        continue;
                    }
                    counts[static_cast<std::size_t>(a - 1) * ng + static_cast<std::size_t>(b - 1)] += 1.0;
                    counts[static_cast<std::size_t>(b - 1) * ng + static_cast<std::size_t>(a - 1)] += 1.0;
                    total += 2.0;
                }
            }
        }
    }
    if (total == 0.0) {
        throw DegenerateError("GLCM has no voxel pairs inside the ROI");
    }
    for (auto& c : counts) {
        c /= total;
    }
    return Glcm{q.ng, std::move(counts)};
}

std::array<double, 13> glcm_features(const Glcm& g) {
    const int ng = g.ng;
    const auto ngs = static_cast<std::size_t>(ng);
    if (ng < 1 || g.p.size() != ngs * ngs) {
        throw DomainError("GLCM has inconsistent size");
    }
    double total = 0.0;
    for (double v : g.p) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw DomainError("GLCM has a negative or non-finite entry");
        }
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw DomainError("GLCM probabilities do not sum to 1");
    }

    std::vector<double> px(ngs, 0.0);
    std::vector<double> py(ngs, 0.0);
    std::vector<double> pSum(2 * ngs + 1, 0.0); // index k = i + j
    std::vector<double> pDiff(ngs, 0.0);        // index k = |i - j|
    double asmValue = 0.0;
    double contrast = 0.0;
    double idm = 0.0;
    double entropy = 0.0;
    double sumIJ = 0.0;
    for (int i = 1; i <= ng; ++i) {
        for (int j = 1; j <= ng; ++j) {
            const double p = g.at(i, j);
            px[static_cast<std::size_t>(i - 1)] += p;
            py[static_cast<std::size_t>(j - 1)] += p;
            pSum[static_cast<std::size_t>(i + j)] += p;
            pDiff[static_cast<std::size_t>(std::abs(i - j))] += p;
            const double diff = static_cast<double>(i - j);
            asmValue += p * p;
            contrast += diff * diff * p;
            idm += p / (1.0 + diff * diff);
            entropy -= plog2(p);
            sumIJ += static_cast<double>(i) * static_cast<double>(j) * p;
        }
    }

    double muX = 0.0;
    double muY = 0.0;
    for (int i = 1; i <= ng; ++i) {
        muX += i * px[static_cast<std::size_t>(i - 1)];
        muY += i * py[static_cast<std::size_t>(i - 1)];
    }
    double varX = 0.0;
    double varY = 0.0;
    double hx = 0.0;
    double hy = 0.0;
    for (int i = 1; i <= ng; ++i) {
        const double a = px[static_cast<std::size_t>(i - 1)];
        const double b = py[static_cast<std::size_t>(i - 1)];
        varX += (i - muX) * (i - muX) * a;
        varY += (i - muY) * (i - muY) * b;
        hx -= plog2(a);
        hy -= plog2(b);
    }
    const double sigmaProduct = std::sqrt(varX) * std::sqrt(varY);
    const double correlation = sigmaProduct > 0.0 ? (sumIJ - muX * muY) / sigmaProduct : 0.0;

    double variance = 0.0;
    double hxy1 = 0.0;
    double hxy2 = 0.0;
    for (int i = 1; i <= ng; ++i) {
        for (int j = 1; j <= ng; ++j) {
            const double p = g.at(i, j);
            variance += (i - muX) * (i - muX) * p;
            const double q = px[static_cast<std::size_t>(i - 1)] * py[static_cast<std::size_t>(j - 1)];
            if (q > 0.0) {
                hxy1 -= p * std::log2(q);
                hxy2 -= q * std::log2(q);
            }
        }
    }

    double sumAverage = 0.0;
    double sumEntropy = 0.0;
    for (std::size_t k = 2; k <= 2 * ngs; ++k) {
        sumAverage += static_cast<double>(k) * pSum[k];
        sumEntropy -= plog2(pSum[k]);
    }
    double sumVariance = 0.0;
    for (std::size_t k = 2; k <= 2 * ngs; ++k) {
        const double d = static_cast<double>(k) - sumAverage;
        sumVariance += d * d * pSum[k];
    }

    double diffAverage = 0.0;
    double diffEntropy = 0.0;
    for (std::size_t k = 0; k < ngs; ++k) {
        diffAverage += static_cast<double>(k) * pDiff[k];
        diffEntropy -= plog2(pDiff[k]);
    }
    double diffVariance = 0.0;
    for (std::size_t k = 0; k < ngs; ++k) {
        const double d = static_cast<double>(k) - diffAverage;
        diffVariance += d * d * pDiff[k];
    }

    const double hmax = std::max(hx, hy);
    const double imc1 = hmax > 0.0 ? (entropy - hxy1) / hmax : 0.0;
    const double imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - entropy))));

    return {asmValue,    contrast,   correlation, variance,     idm,         sumAverage, sumEntropy,
            sumVariance, entropy,    diffVariance, diffEntropy, imc1,        imc2};
}

} // namespace radcompat::features
