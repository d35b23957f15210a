// Generated by ode_oracle.py (mpmath, 50 digits). Do not edit.
#![allow(dead_code, clippy::excessive_precision)]

/// (u, d, t* closed, coverage closed, t* derived, coverage derived)
pub const T_STAR: &[(usize, usize, f64, f64, f64, f64)] = &[
    (2, 3, 1.6479184330021645, 0.80754991027012475, 2.0794415416798359, 0.875),
    (3, 2, 0.92419624074659375, 0.60314973700795013, 1.3862943611198906, 0.75),
    (3, 10, 1.5767011966073637, 0.79334430848779454, 1.700218681115391, 0.81735642101629345),
    (4, 7, 1.065582853203198, 0.65547301242343324, 1.1901530767807737, 0.69582530158089154),
    (2, 50, 3.9918602096205572, 0.98153466723818316, 4.0539794771985694, 0.98264681953349784),
    (6, 50, 1.1087270919402101, 0.67002127356240447, 1.127307010357526, 0.67609564596204625),
];

/// (u, d, sup error at h = 1e-3, sup error at h = 5e-4) on [0, t*]
pub const EULER_SUP_ERROR: &[(usize, usize, f64, f64)] = &[
    (2, 3, 0.00018399083199038607, 0.000091982636013898538),
    (3, 2, 0.00036810949239550998, 0.00018399722619069806),
    (3, 10, 0.00036817099478184869, 0.00018401255776223213),
];

/// One nibble round at eps = 0.1, u = 3, degree 10:
/// (alive fraction, alive degree, conditional coverage)
pub const NIBBLE_STEP: (f64, f64, f64) = (0.90483741803595957, 8.1873075307798186, 0.77847637736611082);
