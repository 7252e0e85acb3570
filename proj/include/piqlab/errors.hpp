#pragma once

#include <stdexcept>
#include <string>

namespace piqlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A p-adic computation cancelled below the digits that are actually known.
class PrecisionLoss : public Error {
public:
    using Error::Error;
};

/// A construction needs a field extension of Q_p that is not modelled.
class ExtensionRequired : public Error {
public:
    using Error::Error;
};

/// The truncation tail of a series may reach the Gauss norm, so the norm
/// cannot be certified from the stored coefficients.
class TailDominates : public Error {
public:
    using Error::Error;
};

class NotDivisible : public Error {
public:
    using Error::Error;
};

/// The subscheme handed to an invariant-only procedure is not invariant.
class InvarianceViolated : public Error {
public:
    using Error::Error;
};

class SearchExhausted : public Error {
public:
    using Error::Error;
};

class BadReduction : public Error {
public:
    using Error::Error;
};

class ConstructionFailed : public Error {
public:
    using Error::Error;
};

class DenominatorNotUnit : public Error {
public:
    using Error::Error;
};

} // namespace piqlab
