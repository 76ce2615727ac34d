#pragma once

#include "whsim/linalg.hpp"

#include <cstddef>
#include <vector>

namespace whsim {

/// Square M-QAM alphabet on the unnormalized odd-integer grid
/// {+-1, +-3, ...}^2, so avg_power = 2(M-1)/3 exactly. Point m = i*side + q
/// maps to (level[i], level[q]) with level[j] = 2j - side + 1.
struct SymbolAlphabet {
    std::size_t order = 0;
    std::vector<cdouble> points;
    double avg_power = 0.0;
};

/// Transmitted slots: indices into an alphabet plus the symbol values.
struct SymbolSequence {
    std::vector<std::size_t> indices;
    std::vector<cdouble> values;

    std::size_t size() const { return indices.size(); }
};

/// Throws InvalidOrder unless order is a perfect square >= 4.
SymbolAlphabet build_qam(std::size_t order);

/// Index of the nearest constellation point; ties break to the lowest index.
std::size_t nearest_symbol(cdouble z, const SymbolAlphabet& alphabet);

/// (1/M) sum |a_m|^2, recomputed from the points.
double average_power(const SymbolAlphabet& alphabet);

SymbolSequence sequence_from_indices(const SymbolAlphabet& alphabet,
                                     std::vector<std::size_t> indices);

} // namespace whsim
