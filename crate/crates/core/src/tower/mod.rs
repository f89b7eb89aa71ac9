//! Covering sets along a chain of finite quotients.
//!
//! Stage sets satisfy `π_{i+1}(X_{i+1}) ⊆ X_i` and `|X_i| <= |G_i| / 2^i`, and
//! every thin set can be translated into the top stage. Large stages exist
//! only in factored form: `X_i` is determined by the kernel covers
//! `L_1, …, L_i` and the canonical sections.

mod build;
mod document;
mod extend;
mod spec;
mod thin;
mod translate;

pub use build::{build_tower, StageClaims, Tower, TowerStage, CLAIM_SAMPLES};
pub use document::{StageDocument, TowerDocument, SECTION_CONVENTION};
pub use extend::{extend_covering, kernel_cover, Extension, KernelCover};
pub use spec::{check_ragaszt, StageAdmissibility, ThinFunction, TowerSpec};
pub use thin::{dimension_estimate, sample_thin_set, slalom_to_thin, Slalom, ThinSet};
pub use translate::{translate_thin, NestingReport, Translation, NESTING_LIMIT};
