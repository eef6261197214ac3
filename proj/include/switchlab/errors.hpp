#pragma once

#include <stdexcept>
#include <string>

namespace switchlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlochOutOfBall : Error {
    explicit BlochOutOfBall(double norm)
        : Error("Bloch vector outside the unit ball: |a| = " + std::to_string(norm)) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotCompletelyPositive : Error {
    explicit NotCompletelyPositive(double min_eig)
        : Error("map is not completely positive: Choi eigenvalue " + std::to_string(min_eig)) {}
    using Error::Error;
};

struct InvalidState : Error {
    using Error::Error;
};

struct InvalidNoiseParameter : Error {
    explicit InvalidNoiseParameter(double t)
        : Error("depolarizing parameter outside [-1/3, 1]: t = " + std::to_string(t)) {}
};

struct EmptyInput : Error {
    using Error::Error;
};

}  // namespace switchlab
