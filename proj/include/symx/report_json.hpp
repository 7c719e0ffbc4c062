#pragma once

#include <json.hpp>

#include "symx/determinants.hpp"
#include "symx/generators.hpp"
#include "symx/matrix.hpp"
#include "symx/spectra.hpp"
#include "symx/symmetrizability.hpp"
#include "symx/version.hpp"

namespace symx {

using nlohmann::json;

inline json scalar_json(const Rational& v) { return format_scalar(v); }
inline json scalar_json(double v) { return v; }

template <class T>
json matrix_json(const Matrix<T>& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < a.cols(); ++j) row.push_back(scalar_json(a(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class T>
json symmetrizer_json(const Symmetrizer<T>& s) {
    json d = json::array();
    for (const T& v : s.diag) d.push_back(scalar_json(v));
    return d;
}

template <class T>
json verdict_json(const SymmetrizabilityVerdict<T>& v) {
    json j;
    if (v.symmetrizable()) {
        j["status"] = "symmetrizable";
        j["symmetrizer"] = symmetrizer_json(*v.symmetrizer());
    } else if (const auto* sv = v.sign_violation()) {
        j["status"] = "sign_violation";
        j["witness"] = {{"i", sv->i},
                        {"j", sv->j},
                        {"a_ij", scalar_json(sv->a_ij)},
                        {"a_ji", scalar_json(sv->a_ji)}};
    } else if (const auto* cv = v.cycle_violation()) {
        j["status"] = "cycle_violation";
        j["witness"] = {{"cycle", cv->cycle},
                        {"forward_product", scalar_json(cv->forward_product)},
                        {"backward_product", scalar_json(cv->backward_product)}};
    }
    return j;
}

inline json spectrum_json(const Spectrum& s) {
    return json{{"values", s.values},
                {"cluster_tol", s.cluster_tol},
                {"source_order", s.source_order}};
}

inline json interlacing_json(const InterlacingCertificate& c) {
    json slacks = json::array();
    for (auto [lo, hi] : c.slacks) slacks.push_back(json::array({lo, hi}));
    return json{{"kind", "interlacing"}, {"k", c.deleted_index},
                {"parent", c.parent.values}, {"child", c.child.values},
                {"slacks", std::move(slacks)}, {"tolerance", c.tolerance},
                {"pass", c.pass}};
}

inline json alternation_json(const AlternationCertificate& c) {
    return json{{"kind", "alternation"}, {"k", c.deleted_index},
                {"values", c.values}, {"signs", c.signs},
                {"skipped", c.skipped}, {"threshold", c.threshold},
                {"pass", c.pass}};
}

template <class T>
json lemma_json(const LemmaReport<T>& r) {
    return json{{"kind", "cofactor_symmetry"}, {"k", r.k}, {"l", r.l},
                {"lambda", scalar_json(r.lambda)}, {"lhs", scalar_json(r.lhs)},
                {"rhs", scalar_json(r.rhs)}, {"residual", scalar_json(r.residual)}};
}

template <class T>
json dodgson_identity_json(const DodgsonIdentityReport<T>& r) {
    return json{{"kind", "dodgson_identity"}, {"k", r.k}, {"l", r.l},
                {"lhs", scalar_json(r.lhs)}, {"rhs", scalar_json(r.rhs)},
                {"residual", scalar_json(r.residual)}, {"scale", scalar_json(r.scale)}};
}

template <class T>
json condensation_json(const CondensationTrace<T>& t) {
    json layers = json::array();
    for (const auto& l : t.layers) layers.push_back(matrix_json(l));
    json j{{"layers", std::move(layers)}, {"fallback_used", t.fallback_used}};
    if (t.fallback_reason)
        j["fallback_reason"] = {{"layer", t.fallback_reason->layer},
                                {"i", t.fallback_reason->i},
                                {"j", t.fallback_reason->j}};
    else
        j["fallback_reason"] = nullptr;
    return j;
}

template <class T>
json minor_sign_json(const MinorSignReport<T>& r) {
    json minors = json::array();
    for (const T& v : r.minors) minors.push_back(scalar_json(v));
    return json{{"kind", "minor_signs"}, {"minors", std::move(minors)},
                {"signs", r.signs}, {"zero_indices", r.zero_indices},
                {"threshold", scalar_json(r.threshold)}, {"uniform", r.uniform}};
}

inline json gen_spec_json(const GenSpec& spec) {
    json j{{"order", spec.order},
           {"pattern", pattern_name(spec.pattern)},
           {"seed", spec.seed},
           {"regime", spec.regime == ScalarRegime::ExactRational ? "rational" : "float64"},
           {"magnitude", spec.magnitude}};
    if (spec.pattern == PatternKind::Banded) j["bandwidth"] = spec.bandwidth;
    if (spec.pattern == PatternKind::PaperExample)
        j["abc"] = json::array({format_scalar(spec.paper_a), format_scalar(spec.paper_b),
                                format_scalar(spec.paper_c)});
    return j;
}

/// Top-level report shell shared by every command.
inline json make_run_report(const std::string& command, const std::string& input, bool pass) {
    return json{{"tool_version", kToolVersion}, {"command", command},
                {"input", input}, {"pass", pass}};
}

} // namespace symx
