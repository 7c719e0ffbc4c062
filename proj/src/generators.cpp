#include "symx/generators.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "symx/symmetrizability.hpp"

namespace symx {

void GenSpec::validate() const {
    if (order < 1) throw SymxError("order must be at least 1");
    if (magnitude < 1) throw SymxError("magnitude bound must be at least 1");
    if (pattern == PatternKind::Banded && (bandwidth < 1 || bandwidth >= order))
        throw SymxError("bandwidth must satisfy 1 <= w < order");
    if (pattern == PatternKind::PaperExample && order != 3)
        throw SymxError("the worked example pattern is 3x3");
}

namespace {

// SplitMix64, used only to spread one user seed into per-purpose streams.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kEntriesStream = 1;
constexpr std::uint64_t kCorruptionStream = 2;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
    return std::mt19937_64(mix64(seed ^ mix64(purpose)));
}

// Unbiased uniform draw in [0, n); engine output is fully specified by the
// standard, so results are identical across platforms.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return x % n;
}

long draw_int(std::mt19937_64& rng, long lo, long hi) {
    return lo + long(draw_below(rng, std::uint64_t(hi - lo + 1)));
}

Rational draw_nonzero(std::mt19937_64& rng, int bound) {
    const long num = draw_int(rng, 1, bound);
    const long den = draw_int(rng, 1, bound);
    const bool neg = draw_below(rng, 2) == 1;
    return make_rational(neg ? -num : num, den);
}

Rational draw_any(std::mt19937_64& rng, int bound) {
    const long num = draw_int(rng, -bound, bound);
    const long den = draw_int(rng, 1, bound);
    return make_rational(num, den);
}

Rational draw_positive(std::mt19937_64& rng, int bound) {
    return make_rational(draw_int(rng, 1, bound), draw_int(rng, 1, bound));
}

bool in_pattern(const GenSpec& spec, int i, int j) {
    if (spec.pattern == PatternKind::Banded) return std::abs(i - j) <= spec.bandwidth;
    return true;
}

} // namespace

RationalMatrix gen_symmetrizable_exact(const GenSpec& spec) {
    spec.validate();
    if (spec.pattern == PatternKind::PaperExample)
        return gen_paper_example(spec.paper_a, spec.paper_b, spec.paper_c);

    auto rng = stream(spec.seed, kEntriesStream);
    const int m = spec.order;

    RationalMatrix s(m, m);
    for (int i = 0; i < m; ++i) s(i, i) = draw_any(rng, spec.magnitude);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (in_pattern(spec, i, j)) {
                const Rational v = draw_nonzero(rng, spec.magnitude);
                s(i, j) = v;
                s(j, i) = v;
            }

    std::vector<Rational> d(m);
    for (int i = 0; i < m; ++i) d[i] = draw_positive(rng, spec.magnitude);

    RationalMatrix a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = s(i, j) / d[i];
    return a;
}

RationalMatrix gen_violation_exact(const GenSpec& spec, ViolationKind kind) {
    spec.validate();
    RationalMatrix a = gen_symmetrizable_exact(spec);
    const int m = spec.order;
    auto rng = stream(spec.seed, kCorruptionStream);

    std::vector<std::pair<int, int>> pairs;  // 0-based, i != j, nonzero entry
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && a(i, j) != 0) pairs.emplace_back(i, j);

    switch (kind) {
    case ViolationKind::SignFlip: {
        if (pairs.empty()) throw SymxError("no off-diagonal entry to corrupt");
        const auto [i, j] = pairs[draw_below(rng, pairs.size())];
        a(i, j) = -a(i, j);
        return a;
    }
    case ViolationKind::OneSidedZero: {
        if (pairs.empty()) throw SymxError("no off-diagonal entry to corrupt");
        const auto [i, j] = pairs[draw_below(rng, pairs.size())];
        a(i, j) = 0;
        return a;
    }
    case ViolationKind::CycleBreak: {
        if (m < 3 || (spec.pattern == PatternKind::Banded && spec.bandwidth == 1))
            throw PatternAcyclicError("pattern support graph has no cycles");
        const SupportGraph g = SupportGraph::of(a);
        // The corrupted entry must sit on a support cycle; redraw otherwise.
        for (std::size_t attempt = 0; attempt < 64 * pairs.size(); ++attempt) {
            const auto [i, j] = pairs[draw_below(rng, pairs.size())];
            if (g.edge_on_cycle(i + 1, j + 1)) {
                a(i, j) *= 2;
                return a;
            }
        }
        throw PatternAcyclicError("support graph has no edge on a cycle");
    }
    }
    throw SymxError("unknown violation kind");
}

namespace {

MatrixVariant apply_regime(RationalMatrix m, ScalarRegime regime) {
    if (regime == ScalarRegime::Float64) return to_real(m);
    return MatrixVariant(std::move(m));
}

} // namespace

MatrixVariant gen_symmetrizable(const GenSpec& spec) {
    return apply_regime(gen_symmetrizable_exact(spec), spec.regime);
}

MatrixVariant gen_violation(const GenSpec& spec, ViolationKind kind) {
    return apply_regime(gen_violation_exact(spec, kind), spec.regime);
}

const char* pattern_name(PatternKind p) {
    switch (p) {
    case PatternKind::Dense: return "dense";
    case PatternKind::Banded: return "banded";
    case PatternKind::PaperExample: return "paper";
    }
    return "?";
}

const char* violation_name(ViolationKind v) {
    switch (v) {
    case ViolationKind::SignFlip: return "signflip";
    case ViolationKind::CycleBreak: return "cyclebreak";
    case ViolationKind::OneSidedZero: return "onesidedzero";
    }
    return "?";
}

std::optional<ViolationKind> violation_from_name(const std::string& name) {
    if (name == "signflip") return ViolationKind::SignFlip;
    if (name == "cyclebreak") return ViolationKind::CycleBreak;
    if (name == "onesidedzero") return ViolationKind::OneSidedZero;
    return std::nullopt;
}

} // namespace symx
