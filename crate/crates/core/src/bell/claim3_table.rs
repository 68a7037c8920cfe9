//! Sign grid of the 3-setting, 4-outcome counterexample expression.
//!
//! Row `x * 4 + a` lists Alice's setting `x` with outcome `a`; within a row
//! the three space-separated groups are Bob's settings I, II, III and the
//! four signs in a group are his outcomes.

pub const CLAIM3_SETTINGS: usize = 3;
pub const CLAIM3_OUTCOMES: usize = 4;

pub const CLAIM3_SIGNS: [&str; 12] = [
    // x = I
    "++-- ++-- ++--",
    "++-- --++ --++",
    "--++ ++-- --++",
    "--++ --++ ++--",
    // x = II
    "+-+- +-+- +-+-",
    "+-+- -+-+ -+-+",
    "-+-+ +-+- -+-+",
    "-+-+ -+-+ +-+-",
    // x = III
    "+--+ +--+ -++-",
    "+--+ -++- +--+",
    "-++- +--+ +--+",
    "-++- -++- -++-",
];
