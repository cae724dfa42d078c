//! Named example links, patterns and trees.

use crate::error::{Error, Result};
use crate::milnor::LinkPresentation;
use crate::solid_torus::{compose, SolidTorusLink};
use crate::tree::{fig1_cell, fig2_cell, FCellTree};

#[derive(Clone, Debug)]
pub enum Builtin {
    Link(LinkPresentation),
    SolidTorus(SolidTorusLink),
    Tree(FCellTree),
}

pub const BUILTIN_NAMES: &[&str] = &[
    "unlink(n)",
    "hopf",
    "borromean",
    "whitehead-longitude-demo",
    "core",
    "bing(depth)",
    "fig1-cell",
    "fig2-cell",
    "handle",
];

pub fn hopf() -> LinkPresentation {
    LinkPresentation::from_text(&["m2", "m1"]).expect("hopf")
}

pub fn borromean() -> LinkPresentation {
    LinkPresentation::from_text(&[
        "m2^-1 m3^-1 m2 m3",
        "m3^-1 m1^-1 m3 m1",
        "m1^-1 m2^-1 m1 m2",
    ])
    .expect("borromean")
}

/// Each longitude is a commutator of a meridian with its own conjugate, so
/// every non-repeating coefficient cancels.
pub fn whitehead_longitude_demo() -> LinkPresentation {
    LinkPresentation::from_text(&[
        "m2^-1 m1^-1 m2^-1 m1 m2 m1^-1 m2 m1",
        "m1^-1 m2^-1 m1^-1 m2 m1 m2^-1 m1 m2",
    ])
    .expect("whitehead demo")
}

/// `name(k)` or `name:k`.
fn parameter(name: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = name.strip_prefix(prefix)?;
    let digits = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix(':'))?;
    Some(
        digits
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter in builtin `{name}`"))),
    )
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let name = name.trim();
    if let Some(n) = parameter(name, "unlink") {
        let n = n?;
        if n == 0 {
            return Err(Error::InvalidLink("unlink needs at least one component".into()));
        }
        return Ok(Builtin::Link(LinkPresentation::unlink(n)));
    }
    if let Some(d) = parameter(name, "bing") {
        return Ok(Builtin::SolidTorus(SolidTorusLink::iterated_bing(d?)?));
    }
    Ok(match name {
        "hopf" => Builtin::Link(hopf()),
        "borromean" => Builtin::Link(borromean()),
        "whitehead-longitude-demo" => Builtin::Link(whitehead_longitude_demo()),
        "core" => Builtin::SolidTorus(SolidTorusLink::core()),
        "fig1-cell" => Builtin::Tree(fig1_cell()),
        "fig2-cell" => Builtin::Tree(fig2_cell()),
        "handle" => Builtin::Tree(FCellTree::single_handle()),
        _ => {
            return Err(Error::Parse(format!(
                "unknown builtin `{name}`; known: {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    })
}

pub fn builtin_link(name: &str) -> Result<LinkPresentation> {
    match builtin(name)? {
        Builtin::Link(l) => Ok(l),
        _ => Err(Error::Parse(format!("builtin `{name}` is not a link"))),
    }
}

pub fn builtin_solid_torus(name: &str) -> Result<SolidTorusLink> {
    match builtin(name)? {
        Builtin::SolidTorus(t) => Ok(t),
        _ => Err(Error::Parse(format!("builtin `{name}` is not a solid torus link"))),
    }
}

pub fn builtin_tree(name: &str) -> Result<FCellTree> {
    match builtin(name)? {
        Builtin::Tree(t) => Ok(t),
        _ => Err(Error::Parse(format!("builtin `{name}` is not a tree"))),
    }
}

/// Named links used for corpus-wide checks.
pub fn link_corpus() -> Vec<(String, LinkPresentation)> {
    let bing = SolidTorusLink::core().bing_double().expect("bing");
    let mut out: Vec<(String, LinkPresentation)> = (1..=4)
        .map(|n| (format!("unlink({n})"), LinkPresentation::unlink(n)))
        .collect();
    out.push(("hopf".into(), hopf()));
    out.push(("borromean".into(), borromean()));
    out.push(("whitehead-longitude-demo".into(), whitehead_longitude_demo()));
    out.push((
        "compose(hopf, bing(1))".into(),
        compose(&hopf(), &bing).expect("compose"),
    ));
    out.push((
        "compose(unlink(2), bing(1))".into(),
        compose(&LinkPresentation::unlink(2), &bing).expect("compose"),
    ));
    out.push((
        "compose(borromean, core)".into(),
        compose(&borromean(), &SolidTorusLink::core()).expect("compose"),
    ));
    out
}

/// Named trees used for corpus-wide checks.
pub fn tree_corpus() -> Vec<(String, FCellTree)> {
    vec![
        ("handle".into(), FCellTree::single_handle()),
        ("fig1-cell".into(), fig1_cell()),
        ("fig2-cell".into(), fig2_cell()),
        ("fig2-cell uniformized".into(), fig2_cell().uniformize().expect("uniformize")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::is_homotopically_trivial;

    #[test]
    fn names_resolve() {
        assert!(matches!(builtin("unlink(3)"), Ok(Builtin::Link(l)) if l.len() == 3));
        assert!(matches!(builtin("unlink:2"), Ok(Builtin::Link(l)) if l.len() == 2));
        assert!(matches!(builtin("bing(1)"), Ok(Builtin::SolidTorus(t)) if t.len() == 2));
        assert!(matches!(builtin("fig2-cell"), Ok(Builtin::Tree(t)) if t.num_leaves() == 5));
        assert!(builtin("nope").is_err());
        assert!(builtin("unlink(x)").is_err());
    }

    #[test]
    fn hopf_longitudes() {
        let h = hopf();
        assert_eq!(h.longitude(0).to_string(), "m2");
        assert_eq!(h.longitude(1).to_string(), "m1");
        assert!(is_homotopically_trivial(&whitehead_longitude_demo(), 3).unwrap());
    }
}
