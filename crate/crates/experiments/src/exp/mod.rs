pub mod dispersive;
pub mod freqloc;
pub mod gauge;
pub mod midpoint;
pub mod nonsqueeze;
pub mod persistence;
pub mod symplectic;
pub mod torusplane;
