#ifndef ANISO_RT_EXPERIMENTS_HPP
#define ANISO_RT_EXPERIMENTS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "aniso_rt/mesh_io.hpp"
#include "aniso_rt/rt_space.hpp"

namespace aniso_rt {

enum class BoundVariant { Classical, RT61, RT62, RT616, RT616b, Stability51, Stability58 };

// Left-hand side and the bound quantities of the interpolation estimates,
// all evaluated with the generic constant c set to 1. Quantities that a
// variant does not use stay NaN. For the stability variants the ratio
// numerator is interp_norm (the norm of the interpolant), not lhs.
struct BoundBreakdown {
    int k = 0;
    int ell = 0;
    double p = 2.0;
    double lhs = NAN;         // || I v - v ||_Lp
    double interp_norm = NAN; // || I v ||_Lp
    double classical_rhs = NAN;
    double rhs_61 = NAN;
    double rhs_62 = NAN;
    double rhs_616 = NAN;  // as printed: only the h-weighted derivative sum
    double rhs_616b = NAN;
    double rhs_51 = NAN;
    double rhs_58 = NAN;
    double ratio_classical = NAN;
    double ratio_61 = NAN;
    double ratio_62 = NAN;
    double ratio_616 = NAN;
    double ratio_616b = NAN;
    double ratio_51 = NAN;
    double ratio_58 = NAN;
    double assumption1_min_M = NAN;
};

// || I^{RT^k} v - v ||_{L^p(T0)} by quadrature.
double error_lhs(int k, const Simplex& s, const VectorField& field, double p);

// One variant; throws Assumption1Violated for the H-script variants when
// |s22| > M alpha2 t1 / alpha3, and WrongElementType for the Type-ii-only
// variants on other elements.
BoundBreakdown bound_rhs(int k, int ell, const Simplex& s, const VectorField& field, double p,
                         BoundVariant variant, double assumption1_M = 10.0);

// Every variant applicable to the element; H-script variants are left NaN
// (with assumption1_min_M recorded) instead of throwing.
BoundBreakdown bound_all(int k, int ell, const Simplex& s, const VectorField& field, double p,
                         double assumption1_M = 10.0);

enum class ScalingLemma { RT41, RT42, RT43, RT12, RT13, RT14, RT14b };

// Ratio lhs/rhs of a scaling inequality with c = 1. The field is the
// reference-side function; its pushforward through the element map plays
// the physical role. Lemmas with free indices (derivative orders <= 2,
// component k) report the worst case.
struct ScalingRatio {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

ScalingRatio check_scaling_lemma(const Simplex& s, const VectorField& ref_field, double p,
                                 ScalingLemma which, double assumption1_M = 10.0);

struct StudyRow {
    int level = 0;
    int num_elements = 0;
    double h = 0.0;
    double H_T0 = 0.0;
    double H_over_h = 0.0;
    double max_angle = 0.0;
    double max_dihedral = 0.0;
    BoundBreakdown agg; // p-aggregated over elements; ratios from aggregates
    double order = NAN; // observed order of lhs between consecutive levels
};

std::vector<StudyRow> run_family_study(const FamilySpec& spec, int k, const VectorField& field,
                                       double p, double assumption1_M = 10.0);

// One CSV row per level; fixed column set, 17 significant digits.
std::string study_csv(const std::vector<StudyRow>& rows);

} // namespace aniso_rt

#endif
