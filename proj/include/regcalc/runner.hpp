#pragma once

#include "regcalc/config.hpp"
#include "regcalc/kolmogorov.hpp"

#include <iosfwd>

namespace regcalc {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

/// Runs one experiment: resolves the config, writes `manifest.ini`, the CSVs
/// and `plot_<command>.py` into run.out, and maps failures onto exit codes.
int run(const Config& config, std::ostream& log);

/// Kolmogorov problem set up from the `kolmo.*` keys.
struct KolmoSetup {
    GalerkinSpace space;
    Vec b;
    Mat sigma;
    QuadraticG g;
    Vec eta;
    double s = 0.5;
};

KolmoSetup kolmo_setup(const ResolvedConfig& cfg);

/// Heat eigenvalues, q_i = i^{-2}, b = 0, sigma = I, g(x) = sum |a_i| x_i^2,
/// eta_i = 1/i.
KolmoSetup default_ou_quadratic(std::size_t dim, double s);

}  // namespace regcalc
