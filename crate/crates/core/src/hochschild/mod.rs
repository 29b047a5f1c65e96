//! Log Hochschild homology: the log diagonal ring, Tor backends, the
//! cosimplicial level complex, Connes' operator and the HKR comparison.

mod levels;

pub use levels::{
    degeneracy_coords, extra_degeneracy_coords, face_coords, permutation_coords, rotation_coords, LevelData,
    LevelMap, LevelRing,
};

mod diagonal;

pub use diagonal::{
    cross_check_koszul, hh_koszul, hh_resolution, log_diagonal_ring, Backend, HochschildClasses, LogDiagonalRing,
};

mod finite;

pub use finite::{check_connes, connes_b, FiniteLevels, NormalizedComplex};

mod bar;

pub use bar::{hh_bar, BarComplex, FiniteAlgebra};

mod theta;

pub use theta::{hh_theta, theta_complex, IdentityReport, ThetaComplex};

mod hkr;

pub use hkr::{conormal_module, hkr_map, HkrDegree, HkrReport};

mod shuffle;

pub use shuffle::shuffle_product;
