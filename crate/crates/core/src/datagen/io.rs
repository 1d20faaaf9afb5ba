//! Line-oriented text encoding of datasets.
//!
//! ```text
//! dataset-v1 feature_dim=<d> classes=<c> family=<family>/<scheme>/k<K> seed=<u64>
//! features=<f,...>; label=<i|->; source=<tag>; params=<key=value,...|->
//! ```
//!
//! Floats are written with 17 significant digits so every value round-trips
//! bit-exactly. A matrix parameter is stored as `rho=` followed by the
//! row-major real and imaginary parts joined with `:`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::sample::{Dataset, DatasetMeta, Family, Provenance, Sample, Source};
use crate::qstate::{Complex64, ComplexMatrix, DensityMatrix, FeatureScheme, PauliString};
use crate::{Error, Result};

const MAGIC: &str = "dataset-v1";

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn join_f64(values: impl IntoIterator<Item = f64>, sep: &str) -> String {
    values.into_iter().map(fmt_f64).collect::<Vec<_>>().join(sep)
}

fn pauli_letters(s: &PauliString) -> String {
    s.indices().iter().map(|&i| ['I', 'X', 'Y', 'Z'][i as usize]).collect()
}

fn encode_params(p: &Provenance) -> String {
    let mut parts = vec![format!("family={}", p.family.tag()), format!("n={}", p.nqubits)];
    if let Some(v) = p.p {
        parts.push(format!("p={}", fmt_f64(v)));
    }
    if let Some(v) = p.theta {
        parts.push(format!("theta={}", fmt_f64(v)));
    }
    if let Some(v) = p.seed {
        parts.push(format!("seed={v}"));
    }
    if let Some(v) = p.truth {
        parts.push(format!("truth={v}"));
    }
    if let Some(s) = &p.pauli {
        parts.push(format!("pauli={}", pauli_letters(s)));
    }
    if let Some(m) = &p.matrix {
        let flat = m.matrix().as_slice().iter().flat_map(|z| [z.re, z.im]);
        parts.push(format!("rho={}", join_f64(flat, ":")));
    }
    parts.join(",")
}

/// Writes the text encoding; identical datasets give identical bytes.
pub fn encode_dataset(ds: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{MAGIC} feature_dim={} classes={} family={}/{}/k{} seed={}",
        ds.feature_dim,
        ds.class_count,
        ds.meta.family,
        ds.meta.scheme.tag(),
        ds.meta.augmentations,
        ds.meta.seed
    );
    for s in &ds.samples {
        let label = s.label.map_or_else(|| "-".to_string(), |c| c.to_string());
        let params = s.params.as_ref().map_or_else(|| "-".to_string(), encode_params);
        let _ = writeln!(
            out,
            "features={}; label={label}; source={}; params={params}",
            join_f64(s.features.iter().copied(), ","),
            s.source.tag()
        );
    }
    out
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    fs::write(path, encode_dataset(ds)).map_err(|e| Error::io(path, e))
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    decode_dataset(&text, path)
}

struct Ctx<'a> {
    path: &'a Path,
    line: usize,
}

impl Ctx<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            msg: msg.into(),
        }
    }

    fn num<T: std::str::FromStr>(&self, key: &str, v: &str) -> Result<T> {
        v.parse().map_err(|_| self.err(format!("bad {key} value `{v}`")))
    }
}

fn field<'a>(ctx: &Ctx, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| ctx.err(format!("expected `{key}=`")))
}

fn parse_floats(ctx: &Ctx, key: &str, v: &str, sep: char) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(sep).map(|x| ctx.num::<f64>(key, x)).collect()
}

fn decode_header(ctx: &Ctx, line: &str) -> Result<(usize, usize, DatasetMeta)> {
    let mut it = line.split(' ');
    if it.next() != Some(MAGIC) {
        return Err(ctx.err(format!("missing `{MAGIC}` header")));
    }
    let dim = ctx.num("feature_dim", field(ctx, it.next(), "feature_dim")?)?;
    let classes = ctx.num("classes", field(ctx, it.next(), "classes")?)?;
    let family_field = field(ctx, it.next(), "family")?;
    let seed = ctx.num("seed", field(ctx, it.next(), "seed")?)?;
    if it.next().is_some() {
        return Err(ctx.err("trailing header fields"));
    }
    let mut parts = family_field.rsplitn(3, '/');
    let (k, scheme, family) = (parts.next(), parts.next(), parts.next());
    let (Some(k), Some(scheme), Some(family)) = (k, scheme, family) else {
        return Err(ctx.err("family must read <family>/<scheme>/k<K>"));
    };
    let scheme = FeatureScheme::from_tag(scheme)
        .ok_or_else(|| ctx.err(format!("unknown feature scheme `{scheme}`")))?;
    let augmentations = ctx.num("augmentations", k.strip_prefix('k').unwrap_or("?"))?;
    Ok((
        dim,
        classes,
        DatasetMeta {
            family: family.to_string(),
            scheme,
            seed,
            augmentations,
        },
    ))
}

fn decode_params(ctx: &Ctx, v: &str) -> Result<Option<Provenance>> {
    if v == "-" {
        return Ok(None);
    }
    let mut family = None;
    let mut nqubits = None;
    let mut p = Provenance::ghz(0, 0.0);
    p.p = None;
    for kv in v.split(',') {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| ctx.err(format!("bad params entry `{kv}`")))?;
        match key {
            "family" => {
                family = Some(
                    Family::from_tag(val).ok_or_else(|| ctx.err(format!("unknown family `{val}`")))?,
                )
            }
            "n" => nqubits = Some(ctx.num::<usize>(key, val)?),
            "p" => p.p = Some(ctx.num(key, val)?),
            "theta" => p.theta = Some(ctx.num(key, val)?),
            "seed" => p.seed = Some(ctx.num(key, val)?),
            "truth" => p.truth = Some(ctx.num(key, val)?),
            "pauli" => {
                let idx = val
                    .chars()
                    .map(|c| match c {
                        'I' => Ok(0),
                        'X' => Ok(1),
                        'Y' => Ok(2),
                        'Z' => Ok(3),
                        _ => Err(ctx.err(format!("bad Pauli letter `{c}`"))),
                    })
                    .collect::<Result<Vec<u8>>>()?;
                p.pauli = Some(PauliString::new(idx).map_err(|e| ctx.err(e.to_string()))?);
            }
            "rho" => {
                let flat = parse_floats(ctx, key, val, ':')?;
                let n2 = flat.len() / 2;
                let dim = (n2 as f64).sqrt().round() as usize;
                if flat.len() % 2 != 0 || dim * dim != n2 {
                    return Err(ctx.err("rho is not a square complex matrix"));
                }
                let data = flat.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
                let m = ComplexMatrix::from_vec(dim, dim, data).map_err(|e| ctx.err(e.to_string()))?;
                p.matrix = Some(DensityMatrix::new(m).map_err(|e| ctx.err(e.to_string()))?);
            }
            _ => return Err(ctx.err(format!("unknown params key `{key}`"))),
        }
    }
    p.family = family.ok_or_else(|| ctx.err("params without family"))?;
    p.nqubits = nqubits.ok_or_else(|| ctx.err("params without n"))?;
    Ok(Some(p))
}

fn decode_sample(ctx: &Ctx, line: &str) -> Result<Sample> {
    let mut it = line.split("; ");
    let features = parse_floats(ctx, "features", field(ctx, it.next(), "features")?, ',')?;
    let label = match field(ctx, it.next(), "label")? {
        "-" => None,
        v => Some(ctx.num("label", v)?),
    };
    let src = field(ctx, it.next(), "source")?;
    let source = Source::parse(src).ok_or_else(|| ctx.err(format!("unknown source `{src}`")))?;
    let params = decode_params(ctx, field(ctx, it.next(), "params")?)?;
    if it.next().is_some() {
        return Err(ctx.err("trailing sample fields"));
    }
    Ok(Sample {
        features,
        label,
        source,
        params,
    })
}

/// Parses the text encoding. Any malformed line, including a final line
/// without its newline (a truncated write), fails the whole load.
pub fn decode_dataset(text: &str, path: &Path) -> Result<Dataset> {
    let mut ctx = Ctx { path, line: 1 };
    if !text.ends_with('\n') {
        ctx.line = text.lines().count().max(1);
        return Err(ctx.err("truncated file: missing final newline"));
    }
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ctx.err("empty file"))?;
    let (dim, classes, meta) = decode_header(&ctx, header)?;
    let mut ds = Dataset::new(dim, classes, meta);
    for (i, line) in lines.enumerate() {
        ctx.line = i + 2;
        let sample = decode_sample(&ctx, line)?;
        ds.push(sample).map_err(|e| ctx.err(e.to_string()))?;
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{gen_labeled_2q, gen_rho_s_unlabeled};
    use crate::rng::Stream;

    fn round_trip(ds: &Dataset) -> Dataset {
        decode_dataset(&encode_dataset(ds), Path::new("mem")).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let ds = gen_labeled_2q(6, FeatureScheme::Full, 3, Stream::Labeled).unwrap();
        assert_eq!(round_trip(&ds), ds);
        let ds = gen_rho_s_unlabeled(8, FeatureScheme::F2, 3).unwrap();
        assert_eq!(round_trip(&ds), ds);
        let text = encode_dataset(&ds);
        assert_eq!(encode_dataset(&round_trip(&ds)), text);
    }

    #[test]
    fn empty_dataset_round_trips() {
        let ds = Dataset::new(
            2,
            2,
            DatasetMeta {
                family: "x".into(),
                scheme: FeatureScheme::Ghz,
                seed: 9,
                augmentations: 1,
            },
        );
        assert_eq!(round_trip(&ds), ds);
    }

    #[test]
    fn truncation_reports_a_line() {
        let ds = gen_labeled_2q(4, FeatureScheme::F1, 1, Stream::Labeled).unwrap();
        let text = encode_dataset(&ds);
        let cut = &text[..text.len() - 40];
        match decode_dataset(cut, Path::new("mem")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        let broken = text.replacen("label=", "lable=", 1);
        assert!(matches!(
            decode_dataset(&broken, Path::new("mem")),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
