#include "tep/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace tep {

namespace {

std::string kind_code(VarKind kind) {
    switch (kind) {
        case VarKind::Build: return "y";
        case VarKind::FlowExisting: return "p0";
        case VarKind::FlowCandidate: return "pc";
        case VarKind::Generation: return "g";
        case VarKind::Angle: return "th";
    }
    return "?";
}

int resolve(const MilpModel& model, const VariableRef& ref) {
    const int idx = model.index_of(ref.kind, ref.major, ref.minor);
    if (idx < 0)
        throw UsageError("cut references variable absent from model: " + kind_code(ref.kind) +
                         "(" + std::to_string(ref.major) + "," + std::to_string(ref.minor) + ")");
    return idx;
}

std::string term_list(const std::vector<std::pair<VariableRef, double>>& terms) {
    std::vector<std::string> parts;
    for (const auto& [ref, coef] : terms) {
        const double rounded = std::round(coef / 1e-12) * 1e-12;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%s:%d:%d:%.12e", kind_code(ref.kind).c_str(), ref.major,
                      ref.minor, rounded);
        parts.emplace_back(buf);
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += p + ";";
    return out;
}

} // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Lemma1: return "lemma1";
        case Provenance::Lemma2: return "lemma2";
        case Provenance::Theorem1: return "theorem1";
        case Provenance::Theorem1Strengthened: return "theorem1_strengthened";
        case Provenance::Theorem2: return "theorem2";
    }
    return "?";
}

std::string to_string(InjectionMode mode) {
    switch (mode) {
        case InjectionMode::Upfront: return "upfront";
        case InjectionMode::UserCut: return "usercut";
        case InjectionMode::Lazy: return "lazy";
    }
    return "?";
}

double AffineBound::eval(const MilpModel& model, const std::vector<double>& point) const {
    double v = constant;
    for (const auto& [ref, coef] : build_terms) v += coef * point[resolve(model, ref)];
    return v;
}

double PathVi::expr_value(const MilpModel& model, const std::vector<double>& point) const {
    double v = 0.0;
    for (const auto& [ref, coef] : expr) v += coef * point[resolve(model, ref)];
    return v;
}

double PathVi::violation(const MilpModel& model, const std::vector<double>& point) const {
    const double v = expr_value(model, point);
    return std::max(v - upper.eval(model, point), lower.eval(model, point) - v);
}

std::vector<Row> PathVi::rows(const MilpModel& model, int id) const {
    // expr <= upper(y)   ->  expr - sum(u_k y_k) <= u0
    // expr >= lower(y)   ->  expr - sum(l_k y_k) >= l0
    std::vector<Row> out;
    Row hi;
    hi.sense = Sense::Le;
    hi.rhs = upper.constant;
    hi.name = "cut" + std::to_string(id) + "_hi_" + to_string(provenance);
    for (const auto& [ref, coef] : expr) hi.coeffs.emplace_back(resolve(model, ref), coef);
    for (const auto& [ref, coef] : upper.build_terms)
        hi.coeffs.emplace_back(resolve(model, ref), -coef);
    out.push_back(std::move(hi));

    Row lo;
    lo.sense = Sense::Ge;
    lo.rhs = lower.constant;
    lo.name = "cut" + std::to_string(id) + "_lo_" + to_string(provenance);
    for (const auto& [ref, coef] : expr) lo.coeffs.emplace_back(resolve(model, ref), coef);
    for (const auto& [ref, coef] : lower.build_terms)
        lo.coeffs.emplace_back(resolve(model, ref), -coef);
    out.push_back(std::move(lo));
    return out;
}

std::string PathVi::canonical_key() const {
    char bounds[128];
    std::snprintf(bounds, sizeof(bounds), "|lo=%.12e|hi=%.12e|",
                  std::round(lower.constant / 1e-12) * 1e-12,
                  std::round(upper.constant / 1e-12) * 1e-12);
    return term_list(expr) + bounds + "L:" + term_list(lower.build_terms) +
           "U:" + term_list(upper.build_terms);
}

bool CutPool::add(PathVi cut) {
    std::string key = cut.canonical_key();
    if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) return false;
    keys_.push_back(std::move(key));
    cuts.push_back(std::move(cut));
    return true;
}

int CutPool::count(Provenance p) const {
    int n = 0;
    for (const auto& c : cuts)
        if (c.provenance == p) ++n;
    return n;
}

std::string dump_cut_pool(const CutPool& pool) {
    std::ostringstream out;
    for (int i = 0; i < pool.size(); ++i) {
        const auto& c = pool.cuts[i];
        out << i << "\t" << to_string(c.provenance) << "\t" << c.source << "\tlo=" << c.lower.constant;
        for (const auto& [ref, coef] : c.lower.build_terms)
            out << (coef >= 0 ? "+" : "") << coef << "*y(" << ref.major << "," << ref.minor << ")";
        out << "\thi=" << c.upper.constant;
        for (const auto& [ref, coef] : c.upper.build_terms)
            out << (coef >= 0 ? "+" : "") << coef << "*y(" << ref.major << "," << ref.minor << ")";
        out << "\texpr=";
        for (const auto& [ref, coef] : c.expr)
            out << (coef >= 0 ? "+" : "") << coef << "*" << kind_code(ref.kind) << "("
                << ref.major << "," << ref.minor << ")";
        out << "\n";
    }
    return out.str();
}

} // namespace tep
