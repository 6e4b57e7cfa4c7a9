#pragma once

/**
 * @file certificate.hpp
 * @brief The regularity data a strong solution carries: Besov exponents,
 * integrability exponent, vacuum-integrability exponent and bound, and the
 * sampled one-sided Lipschitz modulus.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eulervac/exponents.hpp"
#include "eulervac/numerics.hpp"

namespace eulervac {

struct RegularityCertificate {
    double alpha = 1.0;
    double beta = 1.0;
    double q = 0.0;
    double theta = 0.0;
    double c1 = 0.0;              ///< uniform bound on int_{W_eps} rho_eps^-theta
    std::vector<double> times;    ///< sample times of lambda
    std::vector<double> lambda;   ///< Lambda(t) >= 0

    /// Trapezoid integral of lambda over the sampled times.
    double lambda_integral() const
    {
        double s = 0.0;
        for (std::size_t k = 1; k < times.size(); ++k) s += 0.5 * (lambda[k] + lambda[k - 1]) * (times[k] - times[k - 1]);
        return s;
    }

    /// Throws naming the first violated condition.
    void validate(double gamma) const
    {
        if (!(gamma > 1.0)) throw Error("RegularityCertificate: gamma > 1 required");
        const double lo = 1.0 / std::min(2.0, gamma);
        if (!(alpha >= beta)) throw Error("RegularityCertificate: alpha >= beta required");
        if (!(beta > lo)) throw Error("RegularityCertificate: beta > 1/min{2,gamma} required");
        if (!(q >= 2.0 * gamma / (gamma - 1.0))) throw Error("RegularityCertificate: q >= 2 gamma / (gamma - 1) required");
        if (!(theta > theta_threshold(gamma, beta))) throw Error("RegularityCertificate: theta must exceed the threshold for (gamma, beta)");
        if (!(c1 >= 0.0) || !std::isfinite(c1)) throw Error("RegularityCertificate: c1 must be finite and nonnegative");
        if (times.size() != lambda.size()) throw Error("RegularityCertificate: lambda and times differ in length");
        for (std::size_t k = 0; k < lambda.size(); ++k) {
            if (!(lambda[k] >= 0.0) || !std::isfinite(lambda[k]))
                throw Error("RegularityCertificate: lambda must be finite and nonnegative (sample " + std::to_string(k) + ")");
            if (k > 0 && !(times[k] > times[k - 1])) throw Error("RegularityCertificate: times must increase");
        }
        if (!std::isfinite(lambda_integral())) throw Error("RegularityCertificate: lambda is not integrable");
    }
};

} // namespace eulervac
