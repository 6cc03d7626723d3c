//! Exact truncated local-field arithmetic and split-reduction analyses for Weil
//! restrictions of elliptic curves and tori over complete discrete valuation fields.

pub mod localfield;
pub mod serde_num;
pub mod unitpowers;
pub mod status;
pub mod tatesplit;
pub mod kodaira;
pub mod weierstrass;
pub mod conductor;
pub mod tamebase;
