#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "symx/matrix.hpp"
#include "symx/matrix_io.hpp"

namespace symx {

enum class PatternKind { Dense, Banded, PaperExample };
enum class ViolationKind { SignFlip, CycleBreak, OneSidedZero };

/// Deterministic construction recipe. Entries are always drawn as exact
/// rationals; the Float64 regime rounds once at the end.
struct GenSpec {
    int order = 3;
    PatternKind pattern = PatternKind::Dense;
    int bandwidth = 1;  // Banded only, 1 <= bandwidth < order
    Rational paper_a = 0, paper_b = 0, paper_c = 0;
    std::uint64_t seed = 0;
    ScalarRegime regime = ScalarRegime::ExactRational;
    int magnitude = 5;  // entry bound B: numerators in +-1..B, denominators in 1..B

    void validate() const;
};

/// The worked 3x3 family: off-diagonal entries fixed, diagonal free.
template <class T>
Matrix<T> gen_paper_example(const T& a, const T& b, const T& c) {
    return Matrix<T>{{a, T(-3), T(1)}, {T(-6), b, T(4)}, {T(5), T(10), c}};
}

/// Symmetrizable by construction: A = D^(-1) S for a random symmetric S
/// (nonzero off-diagonal inside the pattern) and random positive diagonal D.
RationalMatrix gen_symmetrizable_exact(const GenSpec& spec);

/// A seeded corruption of gen_symmetrizable_exact output that is rejected
/// with the matching violation class.
RationalMatrix gen_violation_exact(const GenSpec& spec, ViolationKind kind);

MatrixVariant gen_symmetrizable(const GenSpec& spec);
MatrixVariant gen_violation(const GenSpec& spec, ViolationKind kind);

const char* pattern_name(PatternKind p);
const char* violation_name(ViolationKind v);
std::optional<ViolationKind> violation_from_name(const std::string& name);

} // namespace symx
