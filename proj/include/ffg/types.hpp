#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace ffg {

enum class BlockId : std::uint64_t {};
enum class ValidatorId : std::uint32_t {};

constexpr std::uint64_t raw(BlockId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint32_t raw(ValidatorId id) { return static_cast<std::uint32_t>(id); }

enum class ErrorCode {
    UnknownParent,
    DuplicateId,
    UnknownBlock,
    DomainError,
    DuplicateVote,
    InvalidEvidence,
    AlreadySlashed,
    UnknownValidator,
    NegativeDeposit,
    ConfigError,
    NeverFinalized,
    IterationLimit,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ffg
