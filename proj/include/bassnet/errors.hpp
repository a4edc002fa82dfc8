#pragma once

#include <stdexcept>
#include <string>

namespace bassnet {

// Error taxonomy shared by the whole library.  Every failure that a caller
// can provoke with bad inputs throws Error with one of these codes; the CLI
// maps codes onto process exit codes.
enum class Errc {
    duplicate_edge,      // two edge entries with the same (from, to)
    self_loop,           // edge (j, j); a node does not influence itself
    negative_rate,       // p_j < 0, or an edge rate <= 0
    index_out_of_range,  // node index outside [1..M]
    invalid_size,        // bad node count / dimension / length argument
    budget_exceeded,     // 2^M state space beyond the configured cap
    invalid_partition,   // {A, B, {j}} is not a partition of the node set
    out_edges_present,   // split requires the focal node to have no out-edges
    no_such_edge,        // queried edge is absent
    bad_omega,           // target node set empty / not a proper subset
    size_mismatch,       // two networks with different node counts
    not_dominated,       // dominance precondition not satisfied
    step_too_large,      // dt * max rate >= 1 in the discrete scheme
    tolerance_not_met,   // integrator could not achieve the requested accuracy
    singular_parameters, // circle formula at a pole with fallback disabled
    not_monotone,        // sampled function fails the monotonicity precondition
    bad_weight,          // weight function not positive / not normalized
    bad_grid,            // time/sample grid not strictly ascending or empty
    io_error,            // file could not be read or written
    bad_format,          // malformed JSON/CSV input
};

inline const char* to_string(Errc c) {
    switch (c) {
        case Errc::duplicate_edge: return "duplicate_edge";
        case Errc::self_loop: return "self_loop";
        case Errc::negative_rate: return "negative_rate";
        case Errc::index_out_of_range: return "index_out_of_range";
        case Errc::invalid_size: return "invalid_size";
        case Errc::budget_exceeded: return "budget_exceeded";
        case Errc::invalid_partition: return "invalid_partition";
        case Errc::out_edges_present: return "out_edges_present";
        case Errc::no_such_edge: return "no_such_edge";
        case Errc::bad_omega: return "bad_omega";
        case Errc::size_mismatch: return "size_mismatch";
        case Errc::not_dominated: return "not_dominated";
        case Errc::step_too_large: return "step_too_large";
        case Errc::tolerance_not_met: return "tolerance_not_met";
        case Errc::singular_parameters: return "singular_parameters";
        case Errc::not_monotone: return "not_monotone";
        case Errc::bad_weight: return "bad_weight";
        case Errc::bad_grid: return "bad_grid";
        case Errc::io_error: return "io_error";
        case Errc::bad_format: return "bad_format";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool ok, Errc code, const std::string& message) {
    if (!ok) fail(code, message);
}

} // namespace bassnet
