#pragma once

#include <cmath>

#include "gasket/errors.hpp"

namespace gasket {

// Characteristic exponents of the gasket and of the alpha-stable process on it.
struct FractalConstants {
    double alpha;    // stability index, in (0,2)
    double d_f;      // fractal (Hausdorff) dimension, log3/log2
    double d_w;      // walk dimension, log5/log2
    double d_s;      // spectral dimension, 2 d_f / d_w
    double d_alpha;  // jump-kernel exponent, d_f + alpha d_w / 2
};

inline FractalConstants constants(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("constants: alpha must lie in (0,2)");
    FractalConstants c;
    c.alpha = alpha;
    c.d_f = std::log(3.0) / std::log(2.0);
    c.d_w = std::log(5.0) / std::log(2.0);
    c.d_s = 2.0 * c.d_f / c.d_w;
    c.d_alpha = c.d_f + alpha * c.d_w / 2.0;
    return c;
}

}  // namespace gasket
