#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include "freelevy/processes.hpp"

namespace test {

using freelevy::cplx;

inline double sup_diff(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g,
                       const std::vector<cplx>& pts = freelevy::standard_test_grid()) {
    double d = 0.0;
    for (cplx z : pts) d = std::max(d, std::abs(f(z) - g(z)));
    return d;
}

// points of C+ away from the real axis
inline std::vector<cplx> upper_grid() {
    std::vector<cplx> g;
    for (double re : {-3.0, -1.0, -0.2, 0.5, 2.0, 5.0})
        for (double im : {0.05, 0.3, 1.0, 4.0}) g.emplace_back(re, im);
    return g;
}

} // namespace test
