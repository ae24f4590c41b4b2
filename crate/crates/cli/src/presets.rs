//! Shipped experiment presets, compiled into the binary so every headline
//! check runs from a name alone.

pub const PRESETS: &[(&str, &str)] = &[
    (
        "01-reproducing-disk",
        include_str!("../presets/01-reproducing-disk.toml"),
    ),
    (
        "02-kernel-disk",
        include_str!("../presets/02-kernel-disk.toml"),
    ),
    (
        "02-kernel-ball2",
        include_str!("../presets/02-kernel-ball2.toml"),
    ),
    (
        "03-radial-disk",
        include_str!("../presets/03-radial-disk.toml"),
    ),
    (
        "03-radial-ball2",
        include_str!("../presets/03-radial-ball2.toml"),
    ),
    (
        "04-arc-horocycle-disk",
        include_str!("../presets/04-arc-horocycle-disk.toml"),
    ),
    (
        "05-realform-ball2",
        include_str!("../presets/05-realform-ball2.toml"),
    ),
    (
        "06-kinvariant-matrixball22",
        include_str!("../presets/06-kinvariant-matrixball22.toml"),
    ),
    ("07-census-22", include_str!("../presets/07-census-22.toml")),
    (
        "08-torus-noncommute",
        include_str!("../presets/08-torus-noncommute.toml"),
    ),
    ("09-commutant", include_str!("../presets/09-commutant.toml")),
    (
        "10-intertwine-disk",
        include_str!("../presets/10-intertwine-disk.toml"),
    ),
    (
        "10-average-disk",
        include_str!("../presets/10-average-disk.toml"),
    ),
    (
        "11-eigenvalue-law-disk",
        include_str!("../presets/11-eigenvalue-law-disk.toml"),
    ),
    (
        "norms-matrixball22",
        include_str!("../presets/norms-matrixball22.toml"),
    ),
];

pub fn find(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
