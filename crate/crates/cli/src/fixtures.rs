//! Scenario files shipped with the binary.

pub const ALL: [(&str, &str); 6] = [
    ("h9_inner.json", include_str!("../fixtures/h9_inner.json")),
    ("h9_broken_b.json", include_str!("../fixtures/h9_broken_b.json")),
    ("h9_broken_c.json", include_str!("../fixtures/h9_broken_c.json")),
    ("h9_extend.json", include_str!("../fixtures/h9_extend.json")),
    ("fq9_outer.json", include_str!("../fixtures/fq9_outer.json")),
    ("fq9_two_outer.json", include_str!("../fixtures/fq9_two_outer.json")),
];

/// Text of a bundled fixture, by file name.
pub fn bundled(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
