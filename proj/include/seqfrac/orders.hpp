#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seqfrac/errors.hpp"

namespace seqfrac {

/// The pair of Caputo orders (alpha, beta) of the sequential operator D^beta(D^alpha u).
struct FractionalOrders {
    double alpha = 0.8;
    double beta = 0.4;

    /// Validates 0 < alpha, beta < 1.
    static FractionalOrders make(double alpha, double beta)
    {
        FractionalOrders o{alpha, beta};
        o.validate();
        return o;
    }

    void validate() const
    {
        if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
            std::ostringstream os;
            os << "fractional orders must lie in (0,1): alpha=" << alpha << ", beta=" << beta;
            throw DomainError(os.str());
        }
    }

    double sum() const { return alpha + beta; }

    /// alpha + beta > 1 and alpha > beta.
    bool admissible() const { return alpha + beta > 1.0 && alpha > beta; }

    void require_admissible() const
    {
        validate();
        if (!admissible()) {
            std::ostringstream os;
            os << "inadmissible orders alpha=" << alpha << ", beta=" << beta
               << ": the boundary-value problem requires alpha+beta>1 and alpha>beta";
            throw AdmissibilityError(os.str());
        }
    }

    /// 0 < alpha < 2 beta < 2, the regime where E2(x,y) <= C/(1+|x|) is proven.
    bool in_decay_wedge() const { return alpha > 0.0 && alpha < 2.0 * beta && beta < 1.0; }

    /// Grading exponent r = 2 - min(alpha, beta).
    double auto_grading() const { return 2.0 - std::min(alpha, beta); }

    friend bool operator==(const FractionalOrders&, const FractionalOrders&) = default;
};

} // namespace seqfrac
