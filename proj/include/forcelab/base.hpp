#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace forcelab {

// A set of conditions of a finite preorder, one bit per element index.
// Posets are capped at 64 conditions so subsets fit in a word.
using cond_mask = std::uint64_t;

inline constexpr int max_conditions = 64;

inline int mask_size(cond_mask m) { return std::popcount(m); }

inline cond_mask bit(int i) { return cond_mask{1} << i; }

inline bool has_bit(cond_mask m, int i) { return (m >> i) & 1; }

// Iterate set bits in ascending index order.
template <class F>
void for_each_bit(cond_mask m, F&& f) {
    while (m) {
        int i = std::countr_zero(m);
        f(i);
        m &= m - 1;
    }
}

// Errors carry a stable machine-readable code in addition to the message;
// the CLI prints the code so scripted callers can dispatch on it.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct empty_poset_error : error {
    explicit empty_poset_error(const std::string& m) : error("EmptyPoset", m) {}
};

struct size_limit_error : error {
    explicit size_limit_error(const std::string& m) : error("SizeLimit", m) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& m) : error("ParseError", m) {}
};

struct unknown_reference_error : error {
    explicit unknown_reference_error(const std::string& m) : error("UnknownReference", m) {}
};

struct pool_too_large_error : error {
    explicit pool_too_large_error(const std::string& m) : error("PoolTooLarge", m) {}
};

struct rank_cap_error : error {
    explicit rank_cap_error(const std::string& m) : error("RankCapExceeded", m) {}
};

struct invalid_argument_error : error {
    explicit invalid_argument_error(const std::string& m) : error("InvalidArgument", m) {}
};

struct unbound_variable_error : error {
    explicit unbound_variable_error(const std::string& m) : error("UnboundVariable", m) {}
};

struct not_ultrafilter_error : error {
    explicit not_ultrafilter_error(const std::string& m) : error("NotUltrafilter", m) {}
};

struct not_generic_error : error {
    explicit not_generic_error(const std::string& m) : error("NotGeneric", m) {}
};

struct unknown_element_error : error {
    explicit unknown_element_error(const std::string& m) : error("UnknownElement", m) {}
};

struct uncertified_name_error : error {
    explicit uncertified_name_error(const std::string& m) : error("UncertifiedName", m) {}
};

struct not_preorder_error : error {
    explicit not_preorder_error(const std::string& m) : error("NotAPreorderUnderGeneric", m) {}
};

struct stage_cap_error : error {
    explicit stage_cap_error(const std::string& m) : error("StageCapExceeded", m) {}
};

struct duplicate_identifier_error : error {
    explicit duplicate_identifier_error(const std::string& m) : error("DuplicateIdentifier", m) {}
};

}  // namespace forcelab
