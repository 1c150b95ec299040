#include "pathforge/fuzzy_control.hpp"

#include <algorithm>
#include <cmath>

#include "pathforge/error.hpp"

namespace pathforge::fuzzy {

namespace {

constexpr double kThird = 1.0 / 3.0;

constexpr std::array<double, kLabelCount> kUniformPeaks{-1.0, -2.0 * kThird, -kThird, 0.0,
                                                        kThird, 2.0 * kThird, 1.0};

}  // namespace

std::string_view name(Label l) {
    static constexpr std::array<std::string_view, kLabelCount> names{"NL", "NM", "NS", "ZR", "PS", "PM", "PL"};
    return names[index(l)];
}

std::string_view output_name(Label l) {
    static constexpr std::array<std::string_view, kLabelCount> names{"nl", "nm", "ns", "zr", "ps", "pm", "pl"};
    return names[index(l)];
}

double Triangle::grade(double x) const {
    if (x < left || x > right) {
        return 0.0;
    }
    if (x <= peak) {
        return peak == left ? 1.0 : (x - left) / (peak - left);
    }
    return peak == right ? 1.0 : (right - x) / (right - peak);
}

MembershipSet MembershipSet::uniform() {
    std::array<Triangle, kLabelCount> tri{};
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        const double peak = kUniformPeaks[i];
        const double left = i == 0 ? peak : kUniformPeaks[i - 1];
        const double right = i + 1 == kLabelCount ? peak : kUniformPeaks[i + 1];
        tri[i] = {left, peak, right};
    }
    return MembershipSet(tri);
}

std::vector<Grade> fuzzify(double value, const MembershipSet& sets) {
    const double x = std::isnan(value) ? 0.0 : std::clamp(value, -1.0, 1.0);
    std::vector<Grade> out;
    for (Label l : kAllLabels) {
        const double g = sets.triangle(l).grade(x);
        if (g > 0.0) {
            out.push_back({l, std::min(g, 1.0)});
        }
    }
    return out;
}

RuleBase RuleBase::published() {
    using enum Label;
    // Columns: e = NL NM NS ZR PS PM PL.
    return RuleBase(Table{{
        /* de = NL */ {NL, NL, NM, ZR, PS, PM, PL},
        /* de = NM */ {NL, NL, NM, ZR, PM, PL, PL},
        /* de = NS */ {NL, NL, NS, ZR, PS, PL, PL},
        /* de = ZR */ {NL, NM, NS, ZR, PS, PM, PL},
        /* de = PS */ {NL, NL, NS, ZR, PS, PL, PL},
        /* de = PM */ {NL, NL, NM, ZR, PM, PL, PL},
        /* de = PL */ {NL, NM, NS, ZR, PM, PL, PL},
    }});
}

RuleBase RuleBase::symmetrized() {
    Table t = published().table();
    for (Label de : kAllLabels) {
        for (Label e : kAllLabels) {
            if (index(e) < index(Label::ZR)) {
                t[index(de)][index(e)] = negate(t[index(negate(de))][index(negate(e))]);
            }
        }
    }
    return RuleBase(t);
}

std::vector<Grade> infer(const std::vector<Grade>& e_grades, const std::vector<Grade>& de_grades,
                         const RuleBase& rules) {
    std::array<double, kLabelCount> strength{};
    for (const Grade& de : de_grades) {
        for (const Grade& e : e_grades) {
            const double firing = std::min(de.grade, e.grade);
            double& slot = strength[index(rules.lookup(de.label, e.label))];
            slot = std::max(slot, firing);
        }
    }
    std::vector<Grade> out;
    for (Label l : kAllLabels) {
        if (strength[index(l)] > 0.0) {
            out.push_back({l, strength[index(l)]});
        }
    }
    return out;
}

OutputCenters uniform_output_centers() { return kUniformPeaks; }

double defuzzify(const std::vector<Grade>& activations, const OutputCenters& centers) {
    double weighted = 0.0;
    double total = 0.0;
    for (const Grade& g : activations) {
        weighted += g.grade * centers[index(g.label)];
        total += g.grade;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorCode::NoActivation, "no output label is activated");
    }
    return weighted / total;
}

void FuzzyPIParams::validate() const {
    for (double g : {gains.kp, gains.ki, gains.kx}) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw Error(ErrorCode::InvalidArgument, "controller gains must be positive and finite");
        }
    }
}

double fuzzy_surface(double scaled_e, double scaled_de, const FuzzyPIParams& params) {
    const std::vector<Grade> e_grades = fuzzify(scaled_e, params.input_sets);
    const std::vector<Grade> de_grades = fuzzify(scaled_de, params.input_sets);
    return defuzzify(infer(e_grades, de_grades, params.rules), params.output_centers);
}

FuzzyPIStepResult fuzzy_pi_step(const FuzzyPIState& state, const Wrench& f_desired, const Wrench& f_actual) {
    const FuzzyPIParams& p = state.params;
    p.validate();

    FuzzyPIStepResult result;
    result.next = state;
    for (std::size_t axis = 0; axis < 6; ++axis) {
        const auto i = static_cast<Eigen::Index>(axis);
        if (!p.selection[axis]) {
            result.next.previous_error[i] = 0.0;
            continue;
        }
        const double e = f_desired[i] - f_actual[i];
        const double de = e - state.previous_error[i];
        double du = 0.0;
        try {
            du = p.gains.kx * fuzzy_surface(p.gains.ki * e, p.gains.kp * de, p);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NoActivation) {
                throw;
            }
            result.no_activation[axis] = true;
        }
        result.delta[i] = du;
        result.next.previous_error[i] = e;
        result.next.accumulated[i] += du;
    }
    return result;
}

}  // namespace pathforge::fuzzy
