#pragma once

namespace dehncan {

enum class Precision { double_prec, extended };

// Solver and certification knobs shared across modules.
struct Config {
    double grad_tol = 1e-10;     // sup-norm gradient stopping tolerance
    int iteration_cap = 10000;   // Newton iteration budget before giving up
    double margin_floor = 1e-9;  // positive margins at or below this are "indeterminate"
    Precision precision = Precision::double_prec;
};

// Default config with `precision` taken from the DEHNCAN_PRECISION
// environment variable ("double" or "extended"; unset means double).
// Throws parse_error on any other value.
Config config_from_env();

}  // namespace dehncan
