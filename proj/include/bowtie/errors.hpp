#pragma once

#include <stdexcept>
#include <string>

namespace bowtie {

/// Validation failures map to CLI exit code 2, numeric failures to 3.
enum class ErrorKind { Validation, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

#define BOWTIE_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message)                              \
            : Error(ErrorKind::Kind, #Name, message) {}                        \
    }

BOWTIE_DEFINE_ERROR(NonIntegrable, Validation);
BOWTIE_DEFINE_ERROR(MalformedSpec, Validation);
BOWTIE_DEFINE_ERROR(OutOfRange, Validation);
BOWTIE_DEFINE_ERROR(WindowTooNarrow, Validation);
BOWTIE_DEFINE_ERROR(QuadratureFailure, Numeric);
BOWTIE_DEFINE_ERROR(EssinfUnresolved, Numeric);
BOWTIE_DEFINE_ERROR(OracleDisagreement, Numeric);
BOWTIE_DEFINE_ERROR(ReproductionMismatch, Numeric);

#undef BOWTIE_DEFINE_ERROR

}  // namespace bowtie
