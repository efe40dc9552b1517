//! Fixtures shared by the benchmarks.

use hallgebra::{ValuedQuiver, cartan::pm_quiver};

/// `Γ^±` for `A_1`.
pub fn pm_a1() -> ValuedQuiver {
    pm_quiver(&ValuedQuiver::point("1"))
}

/// The Kronecker quiver with a doubled arrow.
pub fn kronecker() -> ValuedQuiver {
    ValuedQuiver::single_arrow("1", "2", 2, 2).expect("valid valuation")
}
