#pragma once

namespace nadc {

// Geometry and clocking of the scan chains. One enable pulse travels the
// column chain every step; the row chain shifts once per column pass, so the
// array is rastered column-fast and every neuron is selected exactly once per
// sweep of rows*cols steps.
struct ScanConfig {
    int rows = 7;
    int cols = 30;
    double scan_step_seconds = 30e-9;  // 33.3 MHz column shift
    int gen_ticks_per_step = 10;       // 333 MHz pulse generator clock

    int n_neurons() const { return rows * cols; }
    double tick_seconds() const
    {
        return scan_step_seconds / gen_ticks_per_step;
    }
    double sweep_seconds() const { return scan_step_seconds * n_neurons(); }
};

struct ScanCursor {
    int row = 0;
    int col = 0;
};

inline ScanCursor advance(ScanCursor c, const ScanConfig& cfg)
{
    if (++c.col == cfg.cols) {
        c.col = 0;
        if (++c.row == cfg.rows)
            c.row = 0;
    }
    return c;
}

inline int linear_id(ScanCursor c, const ScanConfig& cfg)
{
    return c.row * cfg.cols + c.col;
}

} // namespace nadc
