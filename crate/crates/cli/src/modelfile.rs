//! TOML model files: either explicit generators or a builtin family.

use serde::Deserialize;
use stabgap_core::model::{cluster_chain, ising_chain, parse_decimal, toric_code, TorusLayout};
use stabgap_core::pauli::parse_pauli;
use stabgap_core::{Energy, Model};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    n_qubits: Option<usize>,
    generators: Option<Vec<String>>,
    couplings: Option<Vec<Number>>,
    builtin: Option<Builtin>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Builtin {
    pub kind: BuiltinKind,
    pub n: Option<usize>,
    pub lx: Option<usize>,
    pub ly: Option<usize>,
    pub coupling: Option<String>,
    #[serde(default)]
    pub periodic: bool,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinKind {
    Ising,
    Cluster,
    Toric,
}

/// A parsed model plus the torus layout when it came from the toric builtin.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub model: Model,
    pub layout: Option<TorusLayout>,
    /// One-line description echoed into output headers.
    pub source: String,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn coupling(text: &str) -> Result<Energy, CliError> {
    parse_decimal(text).map_err(|e| input(format!("coupling {text:?}: {e}")))
}

pub fn parse_model(text: &str) -> Result<ModelFile, CliError> {
    let raw: RawModel = toml::from_str(text).map_err(|e| input(format!("model file: {e}")))?;
    let (model, layout, source) = match (raw.generators, raw.builtin) {
        (Some(_), Some(_)) => return Err(input("model file: give either `generators` or `[builtin]`, not both")),
        (None, None) => return Err(input("model file: missing `generators` or `[builtin]`")),
        (Some(gens), None) => {
            if gens.is_empty() {
                return Err(input("model file: `generators` is empty"));
            }
            let couplings = raw.couplings.ok_or_else(|| input("model file: `couplings` missing"))?;
            let words = gens
                .iter()
                .enumerate()
                .map(|(i, g)| parse_pauli(g).map_err(|e| input(format!("generator {i} ({g:?}): {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(n) = raw.n_qubits {
                if let Some((i, w)) = words.iter().enumerate().find(|(_, w)| w.n() != n) {
                    return Err(input(format!("generator {i} has length {} but n_qubits = {n}", w.n())));
                }
            }
            let cs = couplings
                .iter()
                .map(|c| match c {
                    Number::Text(t) => coupling(t),
                    Number::Int(i) => Ok(Energy::from_integer(*i)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let src = format!("explicit m={}", words.len());
            (Model::new(words, cs)?, None, src)
        }
        (None, Some(b)) => {
            if raw.couplings.is_some() {
                return Err(input("model file: `couplings` belongs inside `[builtin]` as `coupling`"));
            }
            let j = coupling(b.coupling.as_deref().unwrap_or("1"))?;
            let need = |v: Option<usize>, key: &str| v.ok_or_else(|| input(format!("builtin {:?} needs `{key}`", b.kind)));
            let (m, layout, src) = match b.kind {
                BuiltinKind::Ising => {
                    let n = need(b.n, "n")?;
                    (ising_chain(n, j, b.periodic)?, None, format!("builtin ising n={n} periodic={} coupling={j}", b.periodic))
                }
                BuiltinKind::Cluster => {
                    let n = need(b.n, "n")?;
                    (cluster_chain(n, j)?, None, format!("builtin cluster n={n} coupling={j}"))
                }
                BuiltinKind::Toric => {
                    let (lx, ly) = (need(b.lx, "lx")?, need(b.ly, "ly")?);
                    (toric_code(lx, ly, j)?, Some(TorusLayout { lx, ly }), format!("builtin toric lx={lx} ly={ly} coupling={j}"))
                }
            };
            if let Some(n) = raw.n_qubits {
                if n != m.n() {
                    return Err(input(format!("n_qubits = {n} but the builtin has {} qubits", m.n())));
                }
            }
            (m, layout, src)
        }
    };
    let model = match raw.name {
        Some(n) => model.with_name(n),
        None => model,
    };
    Ok(ModelFile { model, layout, source })
}

pub fn load_model(path: &std::path::Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_and_builtin() {
        let f = parse_model("name = \"i3\"\nn_qubits = 3\ngenerators = [\"ZZI\", \"IZZ\"]\ncouplings = [\"1\", \"0.5\"]\n").unwrap();
        assert_eq!(f.model.n(), 3);
        assert_eq!(f.model.couplings()[1], Energy::new(1, 2));
        let t = parse_model("[builtin]\nkind = \"toric\"\nlx = 2\nly = 2\n").unwrap();
        assert_eq!(t.model.n(), 8);
        assert!(t.layout.is_some());
        let c = parse_model("[builtin]\nkind = \"cluster\"\nn = 4\ncoupling = \"2\"\n").unwrap();
        assert_eq!(c.model.m(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_model("generators = []\ncouplings = []\n"), Err(CliError::Input(_))));
        let e = parse_model("generators = [\"XX\", \"ZX\"]\ncouplings = [1, 1]\n").unwrap_err();
        assert!(e.to_string().contains("0") && e.to_string().contains("1"));
        let e = parse_model("generators = [\"ZZ\"\ncouplings = [1]\n").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        assert!(parse_model("n_qubits = 4\ngenerators = [\"ZZZ\"]\ncouplings = [1]\n").is_err());
        assert!(parse_model("[builtin]\nkind = \"ising\"\n").is_err());
    }
}
