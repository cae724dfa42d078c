//! JSON file formats. Every top-level document carries `"format": 1`.
//!
//! ```json
//! { "format": 1, "components": 2, "longitudes": ["m2", "m1"] }
//! ```
//!
//! Solid-torus links add `wedge_word`, `lhat`, `lplus` (link objects) and a
//! 1-based `preferred_order`. Trees are nested `surface` / `link` / `handle`
//! nodes; a link node's `link` is an inline solid-torus object or one of the
//! names `core` and `bing:<depth>`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::builtin::builtin_solid_torus;
use crate::error::{Error, Result};
use crate::milnor::{render_index, LinkPresentation, MuResidue};
use crate::obstruction::PhiCertificate;
use crate::solid_torus::{lhat_alphabet, lplus_alphabet, SolidTorusLink};
use crate::tree::{FCellTree, TreeSpec};
use crate::word::Alphabet;

pub const FORMAT_VERSION: u32 = 1;

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    #[serde(default = "default_format")]
    format: u32,
    components: usize,
    longitudes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meridians: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct SolidTorusFile {
    #[serde(default = "default_format")]
    format: u32,
    components: usize,
    wedge_word: String,
    lhat: LinkFile,
    lplus: LinkFile,
    preferred_order: Vec<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
enum LinkRef {
    Named(String),
    Inline(Box<SolidTorusFile>),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<u32>,
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<TreeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    link: Option<LinkRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    var: Option<String>,
}

fn check_format(found: u32) -> Result<()> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "unsupported format {found}, expected {FORMAT_VERSION}"
        )))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn link_from_file(f: &LinkFile, default_meridians: Option<Alphabet>) -> Result<LinkPresentation> {
    check_format(f.format)?;
    if f.longitudes.len() != f.components {
        return Err(Error::Parse(format!(
            "components = {} but {} longitudes given",
            f.components,
            f.longitudes.len()
        )));
    }
    let meridians = match (&f.meridians, default_meridians) {
        (Some(names), _) => {
            let a = Alphabet::new(names.iter().cloned())?;
            if a.len() != f.components {
                return Err(Error::Parse(format!(
                    "{} meridian names for {} components",
                    a.len(),
                    f.components
                )));
            }
            a
        }
        (None, Some(a)) => a,
        (None, None) => Alphabet::numbered("m", f.components),
    };
    for (i, w) in f.longitudes.iter().enumerate() {
        crate::word::Word::parse(&meridians, w)
            .map_err(|e| Error::Parse(format!("longitude {}: {e}", i + 1)))?;
    }
    LinkPresentation::with_meridians(meridians, &f.longitudes)
}

fn is_numbered(a: &Alphabet) -> bool {
    a == &Alphabet::numbered("m", a.len())
}

fn link_to_file(l: &LinkPresentation, with_names: bool) -> LinkFile {
    LinkFile {
        format: FORMAT_VERSION,
        components: l.len(),
        longitudes: l.longitudes().iter().map(|w| w.to_string()).collect(),
        meridians: (with_names && !is_numbered(l.meridians())).then(|| l.meridians().names().to_vec()),
    }
}

pub fn parse_link(text: &str) -> Result<LinkPresentation> {
    let f: LinkFile = parse_json(text, "link file")?;
    link_from_file(&f, None)
}

pub fn link_to_json(l: &LinkPresentation) -> String {
    serde_json::to_string_pretty(&link_to_file(l, true)).expect("serializable")
}

fn solid_torus_from_file(f: &SolidTorusFile) -> Result<SolidTorusLink> {
    check_format(f.format)?;
    let n = f.components;
    if f.preferred_order.len() != n || f.preferred_order.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::Parse(format!(
            "preferred_order must be a permutation of 1..={n}"
        )));
    }
    let lhat = link_from_file(&f.lhat, Some(lhat_alphabet(n)))?;
    let lplus = link_from_file(&f.lplus, Some(lplus_alphabet(n)))?;
    let w = crate::word::Word::parse(&crate::solid_torus::wedge_alphabet(n), &f.wedge_word)
        .map_err(|e| Error::Parse(format!("wedge_word: {e}")))?;
    SolidTorusLink::new(
        w,
        lhat,
        lplus,
        f.preferred_order.iter().map(|i| i - 1).collect(),
    )
}

fn solid_torus_to_file(t: &SolidTorusLink) -> SolidTorusFile {
    SolidTorusFile {
        format: FORMAT_VERSION,
        components: t.len(),
        wedge_word: t.wedge_word().to_string(),
        lhat: link_to_file(t.lhat(), false),
        lplus: link_to_file(t.lplus(), false),
        preferred_order: t.preferred_order().iter().map(|i| i + 1).collect(),
    }
}

pub fn parse_solid_torus(text: &str) -> Result<SolidTorusLink> {
    let f: SolidTorusFile = parse_json(text, "solid torus file")?;
    solid_torus_from_file(&f)
}

pub fn solid_torus_to_json(t: &SolidTorusLink) -> String {
    serde_json::to_string_pretty(&solid_torus_to_file(t)).expect("serializable")
}

fn spec_from_file(f: &TreeFile) -> Result<TreeSpec> {
    let children = || f.children.iter().map(spec_from_file).collect::<Result<Vec<_>>>();
    match f.kind.as_str() {
        "surface" => Ok(TreeSpec::Surface(children()?)),
        "handle" => {
            if !f.children.is_empty() {
                return Err(Error::Parse("a handle has no children".into()));
            }
            Ok(TreeSpec::Handle(f.var.clone()))
        }
        "link" => {
            let link = match &f.link {
                None => return Err(Error::Parse("link node without `link`".into())),
                Some(LinkRef::Named(name)) => builtin_solid_torus(name)?,
                Some(LinkRef::Inline(file)) => solid_torus_from_file(file)?,
            };
            Ok(TreeSpec::Link(Arc::new(link), children()?))
        }
        other => Err(Error::Parse(format!(
            "unknown node kind `{other}` (expected surface, link or handle)"
        ))),
    }
}

fn link_ref(t: &SolidTorusLink) -> LinkRef {
    if *t == SolidTorusLink::core() {
        return LinkRef::Named("core".into());
    }
    for d in 1..=2 {
        if t.len() == 1 << d && SolidTorusLink::iterated_bing(d).is_ok_and(|b| b == *t) {
            return LinkRef::Named(format!("bing:{d}"));
        }
    }
    LinkRef::Inline(Box::new(solid_torus_to_file(t)))
}

fn spec_to_file(spec: &TreeSpec) -> TreeFile {
    match spec {
        TreeSpec::Surface(c) => TreeFile {
            format: None,
            kind: "surface".into(),
            children: c.iter().map(spec_to_file).collect(),
            link: None,
            var: None,
        },
        TreeSpec::Link(l, c) => TreeFile {
            format: None,
            kind: "link".into(),
            children: c.iter().map(spec_to_file).collect(),
            link: Some(link_ref(l)),
            var: None,
        },
        TreeSpec::Handle(v) => TreeFile {
            format: None,
            kind: "handle".into(),
            children: Vec::new(),
            link: None,
            var: v.clone(),
        },
    }
}

pub fn parse_tree(text: &str) -> Result<FCellTree> {
    let f: TreeFile = parse_json(text, "tree file")?;
    check_format(f.format.unwrap_or(FORMAT_VERSION))?;
    FCellTree::new(spec_from_file(&f)?)
}

pub fn tree_to_json(t: &FCellTree) -> String {
    let mut f = spec_to_file(&t.spec());
    f.format = Some(FORMAT_VERSION);
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[derive(Serialize)]
struct CertificateFile<'a> {
    format: u32,
    mu: &'a MuResidue,
    phi: Value,
    verdict: String,
    witness_monomial: &'a str,
    index: String,
    order: Vec<usize>,
}

fn bigint_value(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn certificate_to_json(c: &PhiCertificate) -> String {
    let (last, init) = c.order.split_last().expect("nonempty order");
    let f = CertificateFile {
        format: FORMAT_VERSION,
        mu: &c.mu_link,
        phi: bigint_value(&c.phi_value),
        verdict: c.verdict.to_string(),
        witness_monomial: &c.witness_monomial,
        index: render_index(init, *last),
        order: c.order.iter().map(|i| i + 1).collect(),
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{borromean, hopf};
    use crate::tree::{fig1_cell, fig2_cell};

    #[test]
    fn link_round_trip() {
        for l in [hopf(), borromean(), LinkPresentation::unlink(3)] {
            assert_eq!(parse_link(&link_to_json(&l)).unwrap(), l);
        }
        let l = parse_link(r#"{"format":1,"components":2,"longitudes":["b","a"],"meridians":["a","b"]}"#).unwrap();
        assert_eq!(parse_link(&link_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn solid_torus_round_trip() {
        for t in [
            SolidTorusLink::core(),
            SolidTorusLink::iterated_bing(2).unwrap(),
            SolidTorusLink::core().bing_double_power(-1).unwrap(),
        ] {
            assert_eq!(parse_solid_torus(&solid_torus_to_json(&t)).unwrap(), t);
        }
    }

    #[test]
    fn tree_round_trip() {
        for t in [fig1_cell(), fig2_cell(), FCellTree::single_handle()] {
            assert_eq!(parse_tree(&tree_to_json(&t)).unwrap(), t);
        }
    }

    #[test]
    fn named_links_in_trees() {
        let t = parse_tree(
            r#"{"format":1,"kind":"surface","children":[
                {"kind":"link","link":"bing:1","children":[{"kind":"handle","var":"x1"},{"kind":"handle","var":"x2"}]}]}"#,
        )
        .unwrap();
        assert_eq!(t.num_leaves(), 2);
        assert_eq!(t.height(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_link("{\"format\":1,\n\"components\":2,\n\"longitudes\":[\"m2\" \"m1\"]}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        assert!(parse_link(r#"{"format":2,"components":1,"longitudes":["1"]}"#).is_err());
        let e = parse_link(r#"{"components":2,"longitudes":["m3","m1"]}"#).unwrap_err();
        assert!(e.to_string().contains("longitude 1"), "{e}");
    }
}
