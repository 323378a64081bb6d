//! Exact computer algebra for finite-dimensional finitely graded algebras.
//!
//! The crate models algebras A = A_0 ⊕ … ⊕ A_ℓ over ℚ or 𝔽p as based
//! multiplication tables, their graded modules as per-degree spaces with
//! action matrices, and provides the homological toolbox built on those:
//! projective covers, syzygies, graded Ext, stable Hom, dualities, and the
//! classification predicates (strictly/homologically well-graded,
//! Iwanaga-Gorenstein, cotilting, Cohen-Macaulay, graded Frobenius) together
//! with the algebra constructions they interact with (Beilinson algebra,
//! quasi-Veronese, Veronese subalgebra, trivial extension, truncated tensor
//! algebra, tensor product, Segre product).
//!
//! Everything is generic over the scalar type through [`field::Scalar`]; the
//! concrete instantiations are re-exported here as [`Rat`] and [`Fp`].

pub mod algebra;
pub mod bimodule;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod ext;
pub mod field;
pub mod matrix;
pub mod module;
pub mod quiver;
pub mod resolution;
pub mod stable;

pub use algebra::{GradedAlgebra, Side, ValidationReport};
pub use bimodule::{Bimodule, TensorProduct};
pub use classify::{
    asid_numbers, classify, hwg_characterization, is_cohen_macaulay, is_cotilting,
    is_graded_frobenius, is_hwg, is_iwanaga_gorenstein, is_swg, stable_endomorphism_report,
    swg_report, top_slice_duality, AsidNumber, AsidReport, ClassificationReport, CmReport,
    CotiltingAnswer, CotiltingClause, CotiltingReport, DegreePairing, EndComparison,
    FrobeniusReport, HwgAnswer, HwgCharacterization, HwgReport, IgReport,
    StableEndomorphismReport, SwgReport, SwgWitness, TopSliceDualityReport,
};
pub use constructions::{
    beilinson, direct_product, module_t, quasi_veronese, segre_product, tensor_product_algebra,
    trivial_extension, truncated_tensor, veronese, BeilinsonAlgebra, QuasiVeronese,
};
pub use error::{GhError, GhResult};
pub use ext::{ExtSeries, ExtTable, VanishingScan};
pub use field::{Fp, FieldSpec, Rat, Scalar};
pub use matrix::{Matrix, Rref};
pub use module::{GradedModule, IsoVerdict, ModuleMap};
pub use quiver::QuiverPresentation;
pub use ext::{GorensteinCertificate, GorensteinStatus};
pub use resolution::{DimVerdict, MinimalResolution, ProjectiveCover};
pub use stable::{ProjectiveSplit, SingHom, StableHomSpace};
