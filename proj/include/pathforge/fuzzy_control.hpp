#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pathforge::fuzzy {

/// Seven linguistic labels, ordered from most negative to most positive.
enum class Label : std::size_t { NL = 0, NM, NS, ZR, PS, PM, PL };

inline constexpr std::size_t kLabelCount = 7;
inline constexpr std::array<Label, kLabelCount> kAllLabels{Label::NL, Label::NM, Label::NS, Label::ZR,
                                                           Label::PS, Label::PM, Label::PL};

constexpr std::size_t index(Label l) { return static_cast<std::size_t>(l); }
/// Upper-case name for input labels ("PS"); output labels print lower-case via `output_name`.
std::string_view name(Label l);
std::string_view output_name(Label l);
/// Mirror label about ZR (PS <-> NS, ...).
constexpr Label negate(Label l) { return static_cast<Label>(kLabelCount - 1 - index(l)); }

/// Triangular membership function. A foot equal to the peak makes that side a
/// shoulder (grade 1 up to the peak).
struct Triangle {
    double left;
    double peak;
    double right;

    double grade(double x) const;
};

struct Grade {
    Label label;
    double grade;

    bool operator==(const Grade&) const = default;
};

class MembershipSet {
public:
    /// Symmetric partition of [-1, 1] with peaks at multiples of 1/3.
    static MembershipSet uniform();

    explicit MembershipSet(const std::array<Triangle, kLabelCount>& triangles) : triangles_(triangles) {}

    const Triangle& triangle(Label l) const { return triangles_[index(l)]; }
    double peak(Label l) const { return triangles_[index(l)].peak; }

private:
    std::array<Triangle, kLabelCount> triangles_;
};

/// Labels with non-zero grade for `value`, which is clamped to [-1, 1] first.
std::vector<Grade> fuzzify(double value, const MembershipSet& sets);

/// 7x7 rule table indexed [change of error][error].
class RuleBase {
public:
    using Table = std::array<std::array<Label, kLabelCount>, kLabelCount>;

    /// The PI-like table as published, rows = de, columns = e.
    static RuleBase published();
    /// Point-symmetric completion: columns e >= ZR are kept and the e < 0 half
    /// is rebuilt as out(de, e) = -out(-de, -e).
    static RuleBase symmetrized();

    explicit RuleBase(const Table& table) : table_(table) {}

    Label lookup(Label de, Label e) const { return table_[index(de)][index(e)]; }
    const Table& table() const { return table_; }

    bool operator==(const RuleBase&) const = default;

private:
    Table table_;
};

/// Mamdani inference: min for rule firing, max to merge rules with the same
/// output label. Returned in label order, zero activations dropped.
std::vector<Grade> infer(const std::vector<Grade>& e_grades, const std::vector<Grade>& de_grades,
                         const RuleBase& rules);

/// Output singleton positions, one per label.
using OutputCenters = std::array<double, kLabelCount>;
OutputCenters uniform_output_centers();

/// Centre-of-area over singletons. Throws NoActivation if every activation is zero.
double defuzzify(const std::vector<Grade>& activations, const OutputCenters& centers);

/// Six-axis force/torque vector: Fx, Fy, Fz (N), Tx, Ty, Tz (N m).
using Wrench = Eigen::Matrix<double, 6, 1>;
/// Six-axis displacement: translations (mm) then rotations (rad).
using Displacement = Eigen::Matrix<double, 6, 1>;
/// Diagonal of the decision matrix S; true marks a force-controlled axis.
using Selection = std::array<bool, 6>;

struct FuzzyPIGains {
    double kp = 0.0;  ///< scales the change of error before fuzzification
    double ki = 0.0;  ///< scales the error before fuzzification
    double kx = 0.0;  ///< scales the defuzzified output into a displacement
};

struct FuzzyPIParams {
    FuzzyPIGains gains;
    Selection selection{};
    MembershipSet input_sets = MembershipSet::uniform();
    OutputCenters output_centers = uniform_output_centers();
    RuleBase rules = RuleBase::published();

    /// Throws InvalidArgument unless all gains are positive and finite.
    void validate() const;
};

struct FuzzyPIState {
    FuzzyPIParams params;
    Wrench previous_error = Wrench::Zero();
    Displacement accumulated = Displacement::Zero();
};

struct FuzzyPIStepResult {
    Displacement delta = Displacement::Zero();
    FuzzyPIState next;
    /// Axes where no rule fired; their delta is zero.
    Selection no_activation{};
};

/**
 * One controller period. On each force-controlled axis the error e = f_d - f_e
 * and its change de = e - e_prev are scaled (K_i e, K_p de), clamped to [-1, 1],
 * run through fuzzify / infer / defuzzify and scaled by K_x. Positive output
 * means "move so the contact force increases". Motion axes get zero.
 */
FuzzyPIStepResult fuzzy_pi_step(const FuzzyPIState& state, const Wrench& f_desired, const Wrench& f_actual);

/// Crisp map from scaled inputs to the normalized output, before K_x.
double fuzzy_surface(double scaled_e, double scaled_de, const FuzzyPIParams& params);

}  // namespace pathforge::fuzzy
