#pragma once

#include "fluxcheck/product.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fluxcheck {

/// F = α̃ + β̃∧ν + γ̃∧δ + ϖ̃∧ε + θ, fiber forms carrying a tilde.
struct FluxAnsatz {
    std::optional<DifferentialForm> alpha_t;  // Ω⁴(M̃)
    std::optional<DifferentialForm> beta_t;   // Ω³(M̃)
    std::optional<DifferentialForm> gamma_t;  // Ω²(M̃)
    std::optional<DifferentialForm> varpi_t;  // Ω¹(M̃)
    std::optional<DifferentialForm> nu;       // Ω¹(M)
    std::optional<DifferentialForm> delta;    // Ω²(M)
    std::optional<DifferentialForm> epsilon;  // Ω³(M)
    std::optional<DifferentialForm> theta;    // Ω⁴(M)
    /// Constant of the mixed cases; inferred from the data when unset.
    std::optional<Rational> c;
};

struct Background {
    std::string name;
    ProductChart product;
    FluxAnsatz ansatz;
    DifferentialForm flux;

    const ChartMetric& h() const { return product.assembled; }
};

/// Checks shapes and charts, then lifts and sums the summands.
Background assemble_flux(const ProductChart& pc, FluxAnsatz ansatz, std::string name = {});

/// One named residual; only nonzero entries are stored.
struct Condition {
    std::string name;
    std::vector<std::pair<std::string, Polynomial>> entries;
    /// Reported but not part of the verdict.
    bool informational = false;
    bool zero() const { return entries.empty(); }
};

struct Section {
    std::string check;
    std::vector<Condition> conditions;
    std::vector<std::string> notes;
    bool skipped = false;
    bool passed() const;
    const Condition* find(std::string_view name) const;
};

struct VerificationReport {
    std::string background;
    std::vector<Section> sections;
    std::vector<std::string> notes;
    std::optional<std::string> error;
    bool passed() const;
};

Condition form_condition(std::string name, const DifferentialForm& f);
Condition matrix_condition(std::string name, const PolyMatrix& m, const ChartPtr& chart, bool symmetric = true);
Condition scalar_condition(std::string name, const Polynomial& p);
/// Zero entries when `holds`; a single unit entry otherwise.
Condition assertion(std::string name, bool holds);

struct FluxNorm {
    Polynomial direct;
    Polynomial blocks;
};
FluxNorm flux_norm_sq(const Background& bg);

/// Five-term block expression of ⋆F.
DifferentialForm star_flux_blocks(const Background& bg);
/// Eight-term block expression of ½F∧F.
DifferentialForm half_flux_square_blocks(const Background& bg);
/// d⋆F − ½F∧F on the product chart.
DifferentialForm maxwell_residual(const Background& bg);
/// Ric + ½⟨i_a F, i_b F⟩ − (1/6) h_ab ‖F‖²
PolyMatrix einstein_residual(const Background& bg);

Section check_flux_norm(const Background& bg);
Section check_closedness(const Background& bg);
Section check_maxwell(const Background& bg);
Section check_einstein(const Background& bg);
Section split_einstein(const Background& bg);
Section check_ricci_isotropic(const Background& bg);

/// Cases 1..9 of the special-case list; 0 evaluates the general typed system.
Section check_special_case(const Background& bg, int which);

enum class Theorem { NullFourForm, NullThreeForm, NullOneForm, MixedNull, ConstantLength };
Theorem parse_theorem(std::string_view name);
std::string_view theorem_name(Theorem t);
Section check_theorem_conditions(const Background& bg, Theorem t);

/// F = θ = ⋆η on M with a Lorentzian fiber.
Section check_case5_contact(const ChartMetric& g, const DifferentialForm& eta, const ChartMetric& fiber);

/// φ as a (1,1)-tensor: phi[i][j] = φ^i_j.
Section check_contact_structure(const ChartMetric& g, const VectorField& xi, const DifferentialForm& eta,
                                const PolyMatrix& phi);

/// 2dvdu + ρ + H(du)² on (v, coordinates of ρ, u).
ChartMetric walker_metric(const ChartMetric& rho, const Polynomial& H, const std::string& v = "v",
                          const std::string& u = "u", const std::string& name = "W");

struct SolutionInstance {
    Background background;
    Polynomial laplacian;  // ΔH
    Polynomial required;   // the value ΔH must take
    std::vector<std::string> notes;
    Polynomial condition_residual() const { return laplacian - required; }
};

SolutionInstance build_sol1(const ChartMetric& rho, const DifferentialForm& theta, const Polynomial& H,
                            const ChartMetric& base);
SolutionInstance build_sol2(const ChartMetric& rho, const DifferentialForm& omega, const Polynomial& H,
                            const ChartMetric& p_metric, const std::string& t = "t");
SolutionInstance build_sol3(const ChartMetric& rho, const Polynomial& H, const ChartMetric& p_metric,
                            const DifferentialForm& kahler, const std::string& t = "t");
/// ω = ±⋆_ρ d⋆_ρ Ω unless supplied; the sign is fixed by the mixed-case relation.
SolutionInstance build_sol4(const ChartMetric& rho, const DifferentialForm& Omega, const Polynomial& H,
                            const ChartMetric& base, const DifferentialForm& nu,
                            std::optional<DifferentialForm> omega = std::nullopt);

/// Runs all standard checks on a background.
VerificationReport verify(const Background& bg, const std::vector<std::string>& checks);

}  // namespace fluxcheck
