#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torsor/singular.hpp"
#include "torsor/variety.hpp"

namespace torsor {

using RatVector = std::vector<BigRational>;
using RatMatrix = std::vector<RatVector>;

std::size_t rank(RatMatrix m);
/// Coefficients x with sum_l x_l rows[l] = target, if the target lies in the row span.
std::optional<RatVector> solve_rows(const RatMatrix& rows, const RatVector& target);

class PeyreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The block system of the constant formula. Rows follow the variable order
/// of the spec, columns of A1 the order of its height monomials.
struct ExponentSystem {
    RatMatrix A1;  ///< J x N
    RatMatrix A2;  ///< J x k
    RatVector A3;  ///< N ones
    RatVector A4;  ///< (0, ..., 0, -1)
    std::size_t J = 0, N = 0, k = 0;
    std::size_t R = 0;       ///< rank of A1
    std::size_t rank_A = 0;  ///< rank of the full block matrix
    std::size_t c2 = 0;      ///< J - R
    std::vector<std::size_t> I;     ///< row set, |I| = R
    std::vector<std::size_t> rest;  ///< the remaining J - R rows
    RatMatrix Bmat;  ///< (J - R) x R, Bmat * Z_I = Z_rest
    RatVector b;     ///< b * Z_I = (A3 A4)
};

/// Throws PeyreError if rk(A1) != rk(A) or the chosen rows are not a basis.
/// An explicit row set overrides spec.row_set; with neither, rows are picked greedily.
ExponentSystem exponent_system(const VarietySpec& spec,
                               const std::optional<std::vector<std::size_t>>& rows = std::nullopt);

/// Volume of {x >= 0 : M x <= rhs} in dimension <= 4, exactly.
BigRational polytope_volume(const RatMatrix& M, const RatVector& rhs);
BigRational c_star(const ExponentSystem& sys);
/// Hit-count estimate of the same volume inside the vertex bounding box.
SingularEstimate c_star_mc(const ExponentSystem& sys, u64 samples, u64 seed);

/// Phi* = sum_i signs[i] prod_{(v, h) in blocks[i]} t_v^h restricted to a row set,
/// with the region prod |t_v|^alpha <= 1 for every monomial in `region`.
struct SurfaceProblem {
    std::size_t dim = 0;
    std::vector<std::vector<std::pair<std::size_t, int>>> blocks;
    std::vector<int> signs;
    std::vector<std::vector<std::pair<std::size_t, double>>> region;
    double prefactor = 1;  ///< 2^(J - R)
};

SurfaceProblem surface_problem(const VarietySpec& spec, const ExponentSystem& sys);
/// Index of the variable solved for: the only member of a block, with exponent 1.
std::optional<std::size_t> solve_variable(const SurfaceProblem& problem);
/// prefactor * integral over {Phi* = 0} of chi / |grad Phi*|, by Monte Carlo in
/// log coordinates over all sign patterns.
SingularEstimate surface_integral(const SurfaceProblem& problem, u64 samples, u64 seed);
SingularEstimate c_infty(const VarietySpec& spec, const ExponentSystem& sys, u64 samples, u64 seed);

/// #{x mod p^L : equation = 0, coprimality mod p} / p^(L (J - 1)).
/// Stratified by which coordinates vanish mod p; smooth strata are lifted by Hensel.
BigRational c_p_density(const VarietySpec& spec, u64 p, unsigned L);
/// Direct enumeration of all residues; needs p^(J L) <= 1e8.
BigRational c_p_density_brute(const VarietySpec& spec, u64 p, unsigned L);

struct LocalFactor {
    u64 p = 2;
    unsigned L = 1;  ///< level at which two consecutive levels agreed
    BigRational value;
};

struct FiniteDensity {
    double value = 1;
    double tail = 0;  ///< envelope estimate of the omitted primes' effect
    double K = 0;     ///< fitted |c_p - 1| <= K / p^2 for p >= 5
    u64 pmax = 0;
    std::vector<LocalFactor> factors;
};

FiniteDensity c_fin(const VarietySpec& spec, u64 pmax, unsigned max_level = 4);

struct SurjectionCheck {
    BigRational direct;     ///< density of the original equation
    BigRational projected;  ///< (1 - 1/p)^-1 times the z1-count density
    [[nodiscard]] bool ok() const { return direct == projected; }
};
SurjectionCheck x2_surjection(u64 p, unsigned L);
bool x2_surjection_check(u64 p, unsigned L);

struct PeyreOptions {
    u64 samples = 10'000'000;
    u64 seed = 1;
    u64 pmax = 10'000;
    std::optional<std::vector<std::size_t>> rows;
};

struct PeyreBreakdown {
    ExponentSystem system;
    BigRational c_star;
    FiniteDensity c_fin;
    SingularEstimate c_infty;
    std::size_t c2 = 0;
    double product = 0;
    double uncertainty = 0;  ///< MC stderr and tail estimate combined in quadrature
    u64 seed = 0;
};

PeyreBreakdown peyre_constant(const VarietySpec& spec, const PeyreOptions& options = {});
std::string breakdown_json(const PeyreBreakdown& b, const VarietySpec& spec);

}  // namespace torsor
