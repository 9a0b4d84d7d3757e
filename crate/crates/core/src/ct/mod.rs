//! The form-preserving group over `F_q[t, t^{-1}]`: matrices, the form,
//! generators and transvection lifts.

pub mod faithful;
pub mod form;
pub mod generators;
pub mod lift;
pub mod lmat;

pub use faithful::{trivial_specializations, Triviality};
pub use form::{BasisVec, Form, MembershipReport};
pub use generators::{build_generating_set, l0_embed, shift_generator, GenSet, Generator, Mat2};
pub use lift::{
    lift_transvection, solve_f, solve_f_chain, solve_f_linear, FSolution, Lift, LiftRoute,
};
pub use lmat::LMat;
