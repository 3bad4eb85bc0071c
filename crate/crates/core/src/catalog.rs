//! A few small presentations used throughout the documentation and tests.

use crate::algebra::Algebra;

/// `k[x,y]/(x², y², xy)`.
pub const EX1: &str = "\
# k[x,y]/(x^2, y^2, xy)
vertex 1
arrow x: 1 -> 1
arrow y: 1 -> 1
zero x x
zero y y
zero x y
zero y x
";

/// `k[x,y]/(x³, y³, xy)`.
pub const EX2: &str = "\
# k[x,y]/(x^3, y^3, xy)
vertex 1
arrow x: 1 -> 1
arrow y: 1 -> 1
zero x x x
zero y y y
zero x y
zero y x
";

/// `k[x,y]/(x⁵, y⁵, xy)`.
pub const EX2_BIG: &str = "\
# k[x,y]/(x^5, y^5, xy)
vertex 1
arrow x: 1 -> 1
arrow y: 1 -> 1
zero x x x x x
zero y y y y y
zero x y
zero y x
";

/// `k[x]/(x²)`.
pub const EX3: &str = "\
# k[x]/(x^2)
vertex 1
arrow x: 1 -> 1
zero x x
";

/// The path algebra of `1 -a-> 2 -b-> 3`.
pub const A3: &str = "\
vertex 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
";

/// A square `ab = cd` with one commutativity relation.
pub const SQUARE: &str = "\
vertex 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 4
arrow c: 1 -> 3
arrow d: 3 -> 4
comm a b = c d
";

fn load(text: &str) -> Algebra {
    Algebra::parse(text).expect("bundled presentation is special biserial")
}

pub fn ex1() -> Algebra {
    load(EX1)
}

pub fn ex2() -> Algebra {
    load(EX2)
}

pub fn ex2_big() -> Algebra {
    load(EX2_BIG)
}

pub fn ex3() -> Algebra {
    load(EX3)
}

pub fn a3() -> Algebra {
    load(A3)
}

pub fn square() -> Algebra {
    load(SQUARE)
}
