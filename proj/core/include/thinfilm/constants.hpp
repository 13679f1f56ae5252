#pragma once

#include <string>

namespace thinfilm {

/// lambda_c = pi/2, the critical renormalized thickness.
double lambda_c();

/// Empirically calibrated constants. The underlying statements only assert
/// that such constants exist; the values here were measured with this
/// library's own minimizers and quadratures (see provenance) and ship as
/// defaults. The THINFILM_CONSTANTS environment variable may point to a JSON
/// file overriding them.
struct Constants {
    double c_hat = 0.77234;     ///< wall-kernel log intercept (tanh profile)
    double c_star = 1.0;        ///< H^{1/2} upper-bound constant
    double beta1 = 0.5;         ///< lower critical-window constant (0 < beta1 < 1)
    double beta2 = 2.05;        ///< upper critical-window constant (beta2 > 1)
    double K_hat = 2.8;         ///< multidomain onset prefactor of the film regime
    double delta_hat = 2.6;     ///< thickness factor bounding the calibrated regime
    double coef_321 = 0.8;      ///< measured constant of the supercritical coherence bound
    double c_wallcount = 0.27;  ///< wall-count prefactor for film-sweep seed prediction
    std::string provenance =
        "calibrated on the reference grids of the acceptance suite (v0.3)";

    /// lambda_-(eps) = lambda_c (1 - |log beta1| / |log eps|)
    double lambda_minus(double eps) const;
    /// lambda_+(eps) = lambda_c (1 + |log beta2| / |log eps|)
    double lambda_plus(double eps) const;

    std::string to_json_text() const;
    static Constants from_json_text(const std::string& text);
    static Constants load(const std::string& path);
    void save(const std::string& path) const;

    /// THINFILM_CONSTANTS override or built-in defaults.
    static Constants resolve();
};

}  // namespace thinfilm
