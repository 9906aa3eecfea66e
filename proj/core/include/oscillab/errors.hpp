#pragma once

#include <stdexcept>
#include <string>

namespace oscillab {

// Every library failure derives from Error; kind() is the stable tag used in
// the CLI's JSON diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define OSCILLAB_ERROR(Name)                                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

OSCILLAB_ERROR(DomainError);
OSCILLAB_ERROR(MismatchError);
OSCILLAB_ERROR(NotFiniteType);
OSCILLAB_ERROR(InvalidJ0);
OSCILLAB_ERROR(OutOfRange);
OSCILLAB_ERROR(BudgetExhausted);
OSCILLAB_ERROR(NoConvergence);
OSCILLAB_ERROR(ChainFailed);
OSCILLAB_ERROR(ClassMismatch);
OSCILLAB_ERROR(InsufficientRange);
OSCILLAB_ERROR(Overflow);
OSCILLAB_ERROR(ConfigError);

#undef OSCILLAB_ERROR

}  // namespace oscillab
