#pragma once

#include "errors.hpp"

#include <vector>

namespace finsler {

// A point (z, eta) of the slit bundle T'M \ {0}.
struct TangentSample {
    std::vector<cplx> z;
    std::vector<cplx> eta;

    int dim() const { return static_cast<int>(z.size()); }

    bool eta_nonzero() const {
        for (const cplx& e : eta)
            if (e != cplx(0.0, 0.0)) return true;
        return false;
    }
};

} // namespace finsler
