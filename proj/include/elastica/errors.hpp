#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ELASTICA_DEFINE_ERROR(Name)                   \
    class Name : public Error {                       \
    public:                                           \
        explicit Name(const std::string& what)        \
            : Error(std::string(#Name ": ") + what) {} \
    }

// Curve has too few samples for the derivative stencils.
ELASTICA_DEFINE_ERROR(TooFewNodes);
// |d/dx gamma| fell below the regularity threshold, or consecutive samples coincide.
ELASTICA_DEFINE_ERROR(DegenerateCurve);
// A per-node field does not live on the curve's grid.
ELASTICA_DEFINE_ERROR(GridMismatch);
// Junction tangential system is singular (normals do not span the plane).
ELASTICA_DEFINE_ERROR(DegenerateJunction);
// Network topology or boundary data is malformed.
ELASTICA_DEFINE_ERROR(InvalidNetwork);
ELASTICA_DEFINE_ERROR(SingularSystem);
// Backtracking reached dt_min without an energy decrease.
ELASTICA_DEFINE_ERROR(StepFailed);
ELASTICA_DEFINE_ERROR(NotStationary);
ELASTICA_DEFINE_ERROR(UnknownShape);
ELASTICA_DEFINE_ERROR(BadParams);
ELASTICA_DEFINE_ERROR(ConfigError);

#undef ELASTICA_DEFINE_ERROR

}  // namespace elastica
