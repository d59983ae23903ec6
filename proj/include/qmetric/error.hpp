#pragma once

#include <stdexcept>
#include <string>

namespace qmetric {

enum class errc {
    // matrix validation, mirroring the axiom numbering in the messages
    non_square,
    nonzero_diagonal,
    negative_entry,
    zero_off_diagonal,
    asymmetric_entry,

    // snowflake
    non_integer_exponent,
    bad_exponent,

    // chains
    chain_too_short,
    bad_index,
    enumeration_budget,

    // dyadic construction
    endpoint_has_no_neighbors,
    same_point,
    nonpositive_index,
    depth_budget,
    precond_violation,
    no_intersection,
    multiple_intersections,

    // experiments and generators
    bad_spec,
    property_violation,

    // everything else
    bad_parameter,
    parse_error,
    io_error,
};

// single exception type for the whole library; code() tells callers which
// contract failed, index_i/index_j name the first offending matrix cell when
// there is one
class error : public std::runtime_error {
public:
    error(errc code, std::string message, int i = -1, int j = -1)
        : std::runtime_error(std::move(message)), code_(code), i_(i), j_(j) {}

    errc code() const noexcept { return code_; }
    int index_i() const noexcept { return i_; }
    int index_j() const noexcept { return j_; }

private:
    errc code_;
    int i_;
    int j_;
};

} // namespace qmetric
