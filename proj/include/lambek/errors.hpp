#pragma once

#include <stdexcept>
#include <string>

namespace lambek {

// common base so callers can catch everything from this library at once
struct LambekError : std::runtime_error {
    explicit LambekError(const std::string& msg) : std::runtime_error(msg) {}
};

// text input could not be tokenized or parsed
struct ParseError : LambekError {
    using LambekError::LambekError;
};

// atom outside the known set (s, np, n)
struct UnknownAtom : ParseError {
    using ParseError::ParseError;
};

// matrix/vector dimensions do not line up
struct ShapeError : LambekError {
    using LambekError::LambekError;
};

// matrix failed a positive semidefiniteness requirement
struct NotPSD : LambekError {
    using LambekError::LambekError;
};

// matrix is not a valid density operator (hermiticity, spectrum or trace)
struct DensityViolation : LambekError {
    using LambekError::LambekError;
};

// measurement with (numerically) zero overlap, no state to renormalize
struct DegenerateMeasurement : LambekError {
    using LambekError::LambekError;
};

// raising past the top level of the auxiliary space
struct LadderOverflow : LambekError {
    using LambekError::LambekError;
};

// tensor slots selected for contraction are incompatible
struct SlotMismatch : LambekError {
    using LambekError::LambekError;
};

// tensor data does not match the signature computed from a type
struct SignatureMismatch : LambekError {
    using LambekError::LambekError;
};

// an array literal has the wrong number of entries
struct LengthMismatch : LambekError {
    using LambekError::LambekError;
};

// a derivation node does not follow from its premises by the stated rule
struct InvalidInference : LambekError {
    using LambekError::LambekError;
};

// a resource variable is missing or used more than once
struct NonLinearVariable : LambekError {
    using LambekError::LambekError;
};

// sequent with no antecedent material
struct EmptyAntecedent : LambekError {
    using LambekError::LambekError;
};

// word not present in the lexicon
struct UnknownWord : LambekError {
    using LambekError::LambekError;
};

// term evaluation failed; message carries the offending subterm
struct EvalError : LambekError {
    using LambekError::LambekError;
};

} // namespace lambek
