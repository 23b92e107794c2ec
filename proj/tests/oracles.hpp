#pragma once

// Independent quadrature used only by tests: double-exponential rule that
// tolerates endpoint singularities, so expected values never come from the
// code under test.

#include <functional>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule.integrate(f, a, b, tol);
}

}  // namespace oracle
