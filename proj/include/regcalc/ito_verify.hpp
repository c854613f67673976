#pragma once

#include "regcalc/chi_window.hpp"
#include "regcalc/estimators.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace regcalc {

/// F(t, x) with the partial derivatives the chain rule needs.
struct C12Function {
    std::string name;
    std::function<double(double, double)> f, ft, fx, fxx;

    static C12Function square();        // x^2
    static C12Function half_square();   // x^2 / 2
    static C12Function time_times_x();  // t x
    static C12Function sine();          // sin x
    static C12Function affine(double a, double b, double c);  // a + b x + c t
};

/// Terms of an Ito-type formula at one eps, evaluated at time t.
/// residual = lhs - time_term - forward_term - perp_term - second_order.
/// gap = increment - lhs, where increment is F(t, X_t) - F(0, X_0).
struct ItoTerms {
    double eps = 0.0;
    double increment = 0.0;
    double lhs = 0.0;
    double time_term = 0.0;
    double forward_term = 0.0;
    double perp_term = 0.0;
    double second_order = 0.0;
    double residual = 0.0;
    double gap = 0.0;
    double sup_residual = 0.0;  // sup over grid times s <= t of |residual(s)|
    double sup_total = 0.0;     // same for |residual + gap|
};

struct ItoReport {
    std::string name;
    std::vector<ItoTerms> levels;  // one per eps, eps decreasing
    double tolerance = 0.0;
    bool passed = false;  // |final residual + gap| <= tolerance
};

/// Terms of  int Z d-Y = int Z dF/dt dr + int Z F_x d-X + 1/2 int Z F_xx d[X]
/// with Y = F(., X), every term at width eps = k dt; d[X] is the first
/// difference in time of the eps-level covariation. Past T the path X is
/// frozen at X_T while F keeps its time argument, so affine F is exact.
ItoTerms chain_rule_terms(const C12Function& F, std::span<const double> z, const SamplePath& x, std::size_t k,
                          double t);
double chain_rule_residual(const C12Function& F, std::span<const double> z, const SamplePath& x, double eps, double t);

/// Z = 1 version of the chain rule.
ItoTerms ito_terms(const C12Function& F, const SamplePath& x, std::size_t k, double t);
double ito_residual(const C12Function& F, const SamplePath& x, double eps, double t);
ItoReport ito_report(const C12Function& F, const SamplePath& x, const EpsSchedule& schedule, double t,
                     double tolerance);

/// Window-process formula for a time-independent elementary functional:
/// F(X_t(.)) - F(X_0(.)) = int D^{delta0}F d-X + (D^perp term) + 1/2 <D^2F, d[X(.)]>.
/// The D^perp term is the double Riemann sum over the whole window.
ItoTerms banach_ito_terms(const ElementaryFunctional& F, const SamplePath& x, const WindowGrid& wg, std::size_t k,
                          double t);
ItoReport banach_ito_residual(const ElementaryFunctional& F, const SamplePath& x, const WindowGrid& wg,
                              const EpsSchedule& schedule, double t, double tolerance);

}  // namespace regcalc
