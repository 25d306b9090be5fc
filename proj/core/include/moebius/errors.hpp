#pragma once

#include <stdexcept>
#include <string>

namespace moebius {

// Base class for all numeric-lab failures. Every error carries a short
// machine-readable kind() so scenario reports can record failures per point
// without string matching on what() text.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define MOEBIUS_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

MOEBIUS_DEFINE_ERROR(DomainViolation);
MOEBIUS_DEFINE_ERROR(RankDeficient);
MOEBIUS_DEFINE_ERROR(UmbilicPoint);
MOEBIUS_DEFINE_ERROR(DimensionTooSmall);
MOEBIUS_DEFINE_ERROR(NotFlat);
MOEBIUS_DEFINE_ERROR(StructureMismatch);
MOEBIUS_DEFINE_ERROR(DegenerateFi);
MOEBIUS_DEFINE_ERROR(IntegrationFailure);
MOEBIUS_DEFINE_ERROR(ParamOutOfRange);
MOEBIUS_DEFINE_ERROR(SpecInvalid);
MOEBIUS_DEFINE_ERROR(ConfigError);

#undef MOEBIUS_DEFINE_ERROR

} // namespace moebius
