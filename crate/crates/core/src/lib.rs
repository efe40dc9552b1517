//! Exact computations with quantum integers, valued quivers, species over
//! small finite fields and their twisted Ringel-Hall algebras.

pub mod qlaurent;
pub mod cartan;
pub mod presver;
pub mod modcat;
pub mod hall;

pub use cartan::{CartanError, CartanMatrix, QuiverSpec, ValuedGraph, ValuedQuiver};
pub use hall::{CheckReport, HallCtx, HallElem, HallError, Normalization, PmContext, Relation, Status};
pub use modcat::{Caps, DimVec, IsoClassId, ModCat, ModError, QuiverRep, SpeciesFile, SpeciesSpec};
pub use presver::{NCExpr, NormalElem, PresError, RatLaurent};
pub use qlaurent::{LaurentPoly, QScalar};
