#include "whsim/constellation.hpp"

#include "whsim/errors.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace whsim {

SymbolAlphabet build_qam(std::size_t order) {
    if (order < 4) throw InvalidOrder("build_qam: order must be >= 4");
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(order))));
    if (side * side != order) throw InvalidOrder("build_qam: order must be a perfect square");

    SymbolAlphabet a;
    a.order = order;
    a.points.reserve(order);
    for (std::size_t i = 0; i < side; ++i) {
        const double re = 2.0 * static_cast<double>(i) - static_cast<double>(side - 1);
        for (std::size_t q = 0; q < side; ++q) {
            const double im = 2.0 * static_cast<double>(q) - static_cast<double>(side - 1);
            a.points.emplace_back(re, im);
        }
    }
    a.avg_power = 2.0 * static_cast<double>(order - 1) / 3.0;
    return a;
}

std::size_t nearest_symbol(cdouble z, const SymbolAlphabet& alphabet) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < alphabet.points.size(); ++m) {
        const double d = std::norm(z - alphabet.points[m]);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

double average_power(const SymbolAlphabet& alphabet) {
    double s = 0.0;
    for (const auto& p : alphabet.points) s += std::norm(p);
    return alphabet.points.empty() ? 0.0 : s / static_cast<double>(alphabet.points.size());
}

SymbolSequence sequence_from_indices(const SymbolAlphabet& alphabet,
                                     std::vector<std::size_t> indices) {
    SymbolSequence seq;
    seq.values.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= alphabet.points.size()) {
            throw DimensionMismatch("sequence_from_indices: index out of range");
        }
        seq.values.push_back(alphabet.points[idx]);
    }
    seq.indices = std::move(indices);
    return seq;
}

} // namespace whsim
