use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::lattice::{Coweight, RootVec, Weight};
use crate::error::{Error, Result};
use crate::scalar::{check_series_cone, Scalar};

/// Default cap on `l` for imaginary indices.
pub const DEFAULT_MAX_L: u16 = 3;

/// Number of series coefficients inspected when checking the nu-cone condition.
pub const DEFAULT_SERIES_ORDER: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexKind {
    Real,
    ImaginaryNonisotropic,
    Isotropic,
}

impl IndexKind {
    pub fn is_real(self) -> bool {
        self == IndexKind::Real
    }

    pub fn is_imaginary(self) -> bool {
        self != IndexKind::Real
    }
}

/// A generator label `(i, l)`; `idx` is the position of `i` in the index list.
///
/// Labels order by index position first and then by `l`, which fixes the
/// lexicographic monomial order used for every basis choice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub idx: u16,
    pub l: u16,
}

impl Label {
    pub fn new(idx: usize, l: usize) -> Self {
        Label {
            idx: idx as u16,
            l: l as u16,
        }
    }

    pub fn i(self) -> usize {
        self.idx as usize
    }

    pub fn l(self) -> i64 {
        self.l as i64
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.idx, self.l)
    }
}

/// One entry of the `indices` list of the JSON schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexSpec {
    pub name: String,
    pub a_ii: i64,
    pub s: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_l: Option<u16>,
}

/// The raw JSON form of a datum, before validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumSpec {
    pub indices: Vec<IndexSpec>,
    #[serde(default)]
    pub a_off_diag: Vec<(String, String, i64)>,
    #[serde(default)]
    pub nu: Vec<(String, u16, String)>,
    #[serde(default)]
    pub max_l: Option<u16>,
}

/// A validated Borcherds-Cartan datum. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Datum {
    names: Vec<String>,
    a: Vec<Vec<i64>>,
    s: Vec<i64>,
    max_l: Vec<u16>,
    nu: BTreeMap<Label, Scalar>,
    warnings: Vec<String>,
    hash: String,
}

impl Datum {
    pub fn from_json(text: &str) -> Result<Datum> {
        let spec: DatumSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("datum JSON: {e}")))?;
        Datum::from_spec(&spec)
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<Datum> {
        let n = spec.indices.len();
        if n == 0 {
            return Err(Error::Datum {
                invariant: "nonempty-index-set",
                detail: "no indices".into(),
            });
        }
        if n > u16::MAX as usize {
            return Err(Error::Datum {
                invariant: "index-count",
                detail: format!("{n} indices"),
            });
        }
        let mut names = Vec::with_capacity(n);
        let mut pos = BTreeMap::new();
        for (k, ix) in spec.indices.iter().enumerate() {
            if pos.insert(ix.name.clone(), k).is_some() {
                return Err(Error::Datum {
                    invariant: "distinct-index-names",
                    detail: format!("index `{}` listed twice", ix.name),
                });
            }
            names.push(ix.name.clone());
        }
        let lookup = |name: &str| {
            pos.get(name)
                .copied()
                .ok_or_else(|| Error::UnknownIndex(name.into()))
        };

        let s: Vec<i64> = spec.indices.iter().map(|ix| ix.s).collect();
        let mut a = vec![vec![0i64; n]; n];
        let mut given = vec![vec![false; n]; n];
        for (k, ix) in spec.indices.iter().enumerate() {
            if ix.s <= 0 {
                return Err(Error::Datum {
                    invariant: "positive-symmetrizer",
                    detail: format!("s_{} = {}", ix.name, ix.s),
                });
            }
            if ix.a_ii > 2 || ix.a_ii % 2 != 0 {
                return Err(Error::Datum {
                    invariant: "even-diagonal",
                    detail: format!(
                        "a_{0}{0} = {1} is not in {{2, 0, -2, -4, ...}}",
                        ix.name, ix.a_ii
                    ),
                });
            }
            a[k][k] = ix.a_ii;
            given[k][k] = true;
        }
        for (iname, jname, v) in &spec.a_off_diag {
            let (i, j) = (lookup(iname)?, lookup(jname)?);
            if i == j {
                return Err(Error::Datum {
                    invariant: "off-diagonal-entry",
                    detail: format!("a_off_diag lists the diagonal entry ({iname},{jname})"),
                });
            }
            if *v > 0 {
                return Err(Error::Datum {
                    invariant: "nonpositive-off-diagonal",
                    detail: format!("a_{iname}{jname} = {v}"),
                });
            }
            if given[i][j] && a[i][j] != *v {
                return Err(Error::Datum {
                    invariant: "consistent-entries",
                    detail: format!("a_{iname}{jname} given twice with different values"),
                });
            }
            a[i][j] = *v;
            given[i][j] = true;
        }
        // Infer a missing transpose entry from symmetrizability.
        for i in 0..n {
            for j in 0..n {
                if i != j && given[i][j] && !given[j][i] {
                    let num = s[i] * a[i][j];
                    if num % s[j] != 0 {
                        return Err(Error::Datum {
                            invariant: "symmetrizable",
                            detail: format!(
                                "a_{}{} cannot be inferred: s_i a_ij = {num} is not divisible by s_j = {}",
                                names[j], names[i], s[j]
                            ),
                        });
                    }
                    a[j][i] = num / s[j];
                    given[j][i] = true;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if s[i] * a[i][j] != s[j] * a[j][i] {
                    return Err(Error::Datum {
                        invariant: "symmetrizable",
                        detail: format!(
                            "s_{0} a_{0}{1} = {2} but s_{1} a_{1}{0} = {3}",
                            names[i],
                            names[j],
                            s[i] * a[i][j],
                            s[j] * a[j][i]
                        ),
                    });
                }
            }
        }

        let global_max = spec.max_l.unwrap_or(DEFAULT_MAX_L);
        let max_l: Vec<u16> = spec
            .indices
            .iter()
            .map(|ix| {
                if ix.a_ii == 2 {
                    1
                } else {
                    ix.max_l.unwrap_or(global_max)
                }
            })
            .collect();
        for (k, &m) in max_l.iter().enumerate() {
            if m == 0 {
                return Err(Error::Datum {
                    invariant: "positive-max-l",
                    detail: format!("max_l for `{}` is 0", names[k]),
                });
            }
        }

        let mut nu = BTreeMap::new();
        for (iname, l, text) in &spec.nu {
            let i = lookup(iname)?;
            if *l == 0 || (a[i][i] == 2 && *l != 1) {
                return Err(Error::Datum {
                    invariant: "nu-label-in-range",
                    detail: format!("nu_({iname},{l}) does not name a generator"),
                });
            }
            let v: Scalar = text.parse()?;
            if v.is_zero() {
                return Err(Error::Datum {
                    invariant: "nonzero-nu",
                    detail: format!("nu_({iname},{l}) = 0"),
                });
            }
            if nu.insert(Label::new(i, *l as usize), v).is_some() {
                return Err(Error::Datum {
                    invariant: "consistent-entries",
                    detail: format!("nu_({iname},{l}) given twice"),
                });
            }
        }

        let mut warnings = Vec::new();
        for (lab, v) in &nu {
            match check_series_cone(v, DEFAULT_SERIES_ORDER) {
                Ok(issues) => {
                    for msg in issues {
                        warnings.push(format!("nu_({},{}) = {v}: {msg}", names[lab.i()], lab.l));
                    }
                }
                Err(e) => warnings.push(format!("nu_({},{}) = {v}: {e}", names[lab.i()], lab.l)),
            }
        }

        let mut d = Datum {
            names,
            a,
            s,
            max_l,
            nu,
            warnings,
            hash: String::new(),
        };
        d.hash = d.compute_hash();
        Ok(d)
    }

    /// Convenience constructor from a matrix given row by row, all `nu = 1`.
    pub fn from_matrix(a: &[Vec<i64>], s: &[i64], max_l: u16) -> Result<Datum> {
        let n = a.len();
        let indices = (0..n)
            .map(|k| IndexSpec {
                name: format!("i{k}"),
                a_ii: a[k][k],
                s: s[k],
                max_l: None,
            })
            .collect();
        let mut off = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off.push((format!("i{i}"), format!("i{j}"), a[i][j]));
                }
            }
        }
        Datum::from_spec(&DatumSpec {
            indices,
            a_off_diag: off,
            nu: Vec::new(),
            max_l: Some(max_l),
        })
    }

    /// Canonical serialization (names, full matrix, s, caps, explicit nu) hashed with SHA-256.
    fn compute_hash(&self) -> String {
        let canon = serde_json::json!({
            "names": self.names,
            "a": self.a,
            "s": self.s,
            "max_l": self.max_l,
            "nu": self.nu.iter().map(|(k, v)| (k.idx, k.l, v.to_string())).collect::<Vec<_>>(),
        });
        hex::encode(Sha256::digest(canon.to_string().as_bytes()))
    }

    pub fn content_hash(&self) -> &str {
        &self.hash
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownIndex(name.into()))
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn s(&self, i: usize) -> i64 {
        self.s[i]
    }

    pub fn max_l(&self, i: usize) -> u16 {
        self.max_l[i]
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn classify(&self, i: usize) -> IndexKind {
        match self.a[i][i] {
            2 => IndexKind::Real,
            0 => IndexKind::Isotropic,
            _ => IndexKind::ImaginaryNonisotropic,
        }
    }

    pub fn classify_name(&self, name: &str) -> Result<IndexKind> {
        Ok(self.classify(self.index(name)?))
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.a[i][i] == 2
    }

    pub fn real_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_real(i)).collect()
    }

    pub fn imaginary_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_real(i)).collect()
    }

    /// `nu_{il}`, defaulting to 1 when not listed.
    pub fn nu(&self, lab: Label) -> Scalar {
        self.nu.get(&lab).cloned().unwrap_or_else(Scalar::one)
    }

    /// All generator labels `(i,l)` within the caps, in label order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for l in 1..=self.max_l[i] {
                out.push(Label::new(i, l as usize));
            }
        }
        out
    }

    pub fn check_label(&self, lab: Label) -> Result<()> {
        if lab.i() >= self.rank() {
            return Err(Error::UnknownIndex(format!("#{}", lab.idx)));
        }
        if lab.l == 0 || (self.is_real(lab.i()) && lab.l != 1) {
            return Err(Error::domain(format!(
                "({}, {}) is not a generator label",
                self.names[lab.i()],
                lab.l
            )));
        }
        if lab.l > self.max_l[lab.i()] {
            return Err(Error::budget(
                format!("generator label l for index `{}`", self.names[lab.i()]),
                lab.l as usize,
                self.max_l[lab.i()] as usize,
            ));
        }
        Ok(())
    }

    /// Exponent of `q_i = q^{s_i}`.
    pub fn qi(&self, i: usize) -> i64 {
        self.s[i]
    }

    /// Exponent of `q_(i) = q^{(alpha_i, alpha_i)/2}`.
    pub fn q_paren(&self, i: usize) -> i64 {
        self.s[i] * self.a[i][i] / 2
    }

    /// `(alpha_i, alpha_j) = s_i a_ij`.
    pub fn pair_simple(&self, i: usize, j: usize) -> i64 {
        self.s[i] * self.a[i][j]
    }

    /// `(beta, gamma)` on the root lattice.
    pub fn root_pairing(&self, b: &RootVec, g: &RootVec) -> i64 {
        let mut acc = 0;
        for (i, &bi) in b.0.iter().enumerate() {
            if bi == 0 {
                continue;
            }
            for (j, &gj) in g.0.iter().enumerate() {
                if gj != 0 {
                    acc += bi * gj * self.pair_simple(i, j);
                }
            }
        }
        acc
    }

    /// `(beta, lambda) = sum_i k_i s_i lambda(h_i)`.
    pub fn weight_root_pairing(&self, b: &RootVec, w: &Weight) -> i64 {
        b.0.iter()
            .enumerate()
            .map(|(i, &k)| k * self.s[i] * w.h_values[i])
            .sum()
    }

    /// `alpha_j` as a weight: `alpha_j(h_i) = a_ij`, `alpha_j(d_i) = delta_ij`.
    pub fn simple_root_weight(&self, j: usize) -> Weight {
        let n = self.rank();
        Weight {
            h_values: (0..n).map(|i| self.a[i][j]).collect(),
            d_values: (0..n).map(|i| (i == j) as i64).collect(),
        }
    }

    pub fn root_weight(&self, b: &RootVec) -> Weight {
        let mut w = Weight::zero(self.rank());
        for (j, &k) in b.0.iter().enumerate() {
            if k != 0 {
                w = w.add(&self.simple_root_weight(j).scale(k));
            }
        }
        w
    }

    /// `alpha_j(h)` for a coweight `h`.
    pub fn alpha_on(&self, j: usize, h: &Coweight) -> i64 {
        let a: i64 = (0..self.rank()).map(|k| h.h[k] * self.a[k][j]).sum();
        a + h.d[j]
    }

    /// `beta(h)` for a root lattice element.
    pub fn root_on(&self, b: &RootVec, h: &Coweight) -> i64 {
        b.0.iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(j, &k)| k * self.alpha_on(j, h))
            .sum()
    }

    /// The coweight `K_i^l`, i.e. `l s_i h_i`.
    pub fn k_power(&self, i: usize, l: i64) -> Coweight {
        Coweight::coroot(self.rank(), i, l * self.s[i])
    }

    /// The coweight of `K_beta = prod K_i^{k_i}`.
    pub fn k_root(&self, b: &RootVec) -> Coweight {
        let mut c = Coweight::zero(self.rank());
        for (i, &k) in b.0.iter().enumerate() {
            c.h[i] += k * self.s[i];
        }
        c
    }

    /// Degree of a label as a root lattice element.
    pub fn label_root(&self, lab: Label) -> RootVec {
        RootVec::simple(self.rank(), lab.i(), lab.l())
    }

    pub fn require_real(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::UnknownIndex(format!("#{i}")));
        }
        if !self.is_real(i) {
            return Err(Error::domain(format!(
                "index `{}` is not real",
                self.names[i]
            )));
        }
        Ok(())
    }

    /// `r_i(lambda) = lambda - lambda(h_i) alpha_i`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Result<Weight> {
        self.require_real(i)?;
        Ok(w.sub(&self.simple_root_weight(i).scale(w.h_values[i])))
    }

    /// `r_i(h) = h - alpha_i(h) h_i`.
    pub fn reflect_coweight(&self, i: usize, h: &Coweight) -> Result<Coweight> {
        self.require_real(i)?;
        Ok(h.add_coroot(i, -self.alpha_on(i, h)))
    }

    /// `r_i(beta) = beta - (sum_j k_j a_ij) alpha_i` on the root lattice.
    pub fn reflect_root(&self, i: usize, b: &RootVec) -> Result<RootVec> {
        self.require_real(i)?;
        let c: i64 = b.0.iter().enumerate().map(|(j, &k)| k * self.a[i][j]).sum();
        Ok(b.add_simple(i, -c))
    }

    /// The weight with the given values on `h_i` and zero on every `d_i`.
    pub fn weight_of(&self, h_values: &[i64]) -> Weight {
        let mut w = Weight::zero(self.rank());
        w.h_values.copy_from_slice(h_values);
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1A1_ISO: &str = r#"{
        "indices": [{"name":"i","a_ii":2,"s":1},{"name":"j","a_ii":0,"s":2}],
        "a_off_diag": [["i","j",-2]],
        "max_l": 2
    }"#;

    #[test]
    fn parses_and_infers_transpose() {
        let d = Datum::from_json(A1A1_ISO).unwrap();
        assert_eq!(d.a(1, 0), -1);
        assert_eq!(d.classify(0), IndexKind::Real);
        assert_eq!(d.classify(1), IndexKind::Isotropic);
        assert_eq!(d.labels().len(), 3);
        assert_eq!(d.nu(Label::new(1, 2)), Scalar::one());
    }

    #[test]
    fn rejects_named_invariants() {
        let odd = r#"{"indices":[{"name":"i","a_ii":-3,"s":1}]}"#;
        match Datum::from_json(odd) {
            Err(Error::Datum { invariant, .. }) => assert_eq!(invariant, "even-diagonal"),
            other => panic!("{other:?}"),
        }
        let asym = r#"{"indices":[{"name":"i","a_ii":2,"s":1},{"name":"j","a_ii":2,"s":1}],
            "a_off_diag":[["i","j",-1],["j","i",-2]]}"#;
        match Datum::from_json(asym) {
            Err(Error::Datum { invariant, .. }) => assert_eq!(invariant, "symmetrizable"),
            other => panic!("{other:?}"),
        }
        let zero_nu = r#"{"indices":[{"name":"i","a_ii":0,"s":1}],"nu":[["i",1,"0"]]}"#;
        match Datum::from_json(zero_nu) {
            Err(Error::Datum { invariant, .. }) => assert_eq!(invariant, "nonzero-nu"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let d1 = Datum::from_json(A1A1_ISO).unwrap();
        let d2 = Datum::from_json(A1A1_ISO).unwrap();
        assert_eq!(d1.content_hash(), d2.content_hash());
        let d3 = Datum::from_json(&A1A1_ISO.replace("\"max_l\": 2", "\"max_l\": 3")).unwrap();
        assert_ne!(d1.content_hash(), d3.content_hash());
    }

    #[test]
    fn suspicious_nu_warns() {
        let d = Datum::from_json(
            r#"{"indices":[{"name":"i","a_ii":-2,"s":1}],"nu":[["i",1,"1-q^-1"]]}"#,
        )
        .unwrap();
        assert!(!d.warnings().is_empty());
    }
}
