//! Positions on a host path, with an infinitesimal level for the gaps that
//! subdividing an edge can open.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Position `a + e·ε` for an infinitesimal `ε > 0`; ordered lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub a: i64,
    pub e: i64,
}

impl Coord {
    /// One whole host node.
    pub const UNIT: Coord = Coord { a: 1, e: 0 };
    /// One node inserted by subdivision.
    pub const EPS: Coord = Coord { a: 0, e: 1 };

    pub const fn new(a: i64, e: i64) -> Self {
        Coord { a, e }
    }

    pub const fn int(a: i64) -> Self {
        Coord { a, e: 0 }
    }

    pub fn is_integral(self) -> bool {
        self.e == 0
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord::new(self.a + o.a, self.e + o.e)
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        Coord::new(self.a - o.a, self.e - o.e)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord::new(-self.a, -self.e)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            0 => write!(f, "{}", self.a),
            e => write!(f, "{}{:+}ε", self.a, e),
        }
    }
}
