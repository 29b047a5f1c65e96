//! Polynomial rings, Gröbner bases, syzygies and free resolutions.

pub mod buchberger;
pub mod ideal;
pub mod module;
pub mod parse;
pub mod poly;

pub use buchberger::{Budget, ModVec, ModuleGb, ModuleOrder};
pub use ideal::{groebner_basis, normal_form, Ideal, MonomialBasis, QuotientRing};
pub use module::{free_resolution, syzygies_by_elimination, syzygies_over, FPModule, FreeComplex, FreeResolution};
pub use parse::{parse_expr, parse_poly, Expr};
pub use poly::{Exp, MonomialOrder, Poly, PolyRing};
