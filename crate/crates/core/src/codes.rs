//! Construction and validation of CSS quantum LDPC codes.
//!
//! Families covered:
//! - generalized bicycle: `h_x = [A | B]`, `h_z = [Bᵀ | Aᵀ]` from two
//!   commuting circulants (with an optional row-deletion variant),
//! - hypergraph product of two classical parity-check matrices,
//! - quasi-cyclic classical matrices from circulant-permutation exponent
//!   tables (used as hypergraph-product constituents).
//!
//! Every constructor verifies that the X and Z checks commute and extracts a
//! paired logical-operator basis (`l_x · l_zᵀ = I`).

use crate::{BitMatrix, BitVec, Error, Result};
use std::path::{Path, PathBuf};

/// Which error type a decoding run targets.
///
/// X-type errors are detected by the Z checks, so side X decodes on the
/// `h_z` graph, treats `h_x` rows as harmless equivalences, and tests
/// miscorrections against `l_z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Z,
}

impl Side {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Side::X),
            "z" => Ok(Side::Z),
            other => Err(Error::Parse(format!("side must be x or z, got {other:?}"))),
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::X => "x",
            Side::Z => "z",
        })
    }
}

/// Defining data of a binary circulant: dimension and first-row exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantSpec {
    size: usize,
    exponents: Vec<usize>,
}

impl CirculantSpec {
    /// Exponents must be strictly increasing and all below `size`.
    pub fn new(size: usize, exponents: &[usize]) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("circulant size must be > 0".into()));
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "circulant exponents must be strictly increasing".into(),
            ));
        }
        if let Some(&e) = exponents.last() {
            if e >= size {
                return Err(Error::InvalidArgument(format!(
                    "circulant exponent {e} >= size {size}"
                )));
            }
        }
        Ok(Self {
            size,
            exponents: exponents.to_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }
}

/// L×L circulant whose row i has ones at columns (e + i) mod L.
pub fn circulant_from_spec(spec: &CirculantSpec) -> BitMatrix {
    let l = spec.size();
    let mut m = BitMatrix::zeros(l, l);
    for i in 0..l {
        for &e in spec.exponents() {
            m.set(i, (e + i) % l, true);
        }
    }
    m
}

/// A CSS code: X/Z parity checks plus a paired logical basis.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub name: String,
    pub h_x: BitMatrix,
    pub h_z: BitMatrix,
    pub l_x: BitMatrix,
    pub l_z: BitMatrix,
    pub n: usize,
    pub k: usize,
}

impl CssCode {
    /// Builds a code from its check matrices: verifies commutation, computes
    /// the logical bases and (n, k).
    pub fn from_checks(name: &str, h_x: BitMatrix, h_z: BitMatrix) -> Result<Self> {
        if h_x.cols() != h_z.cols() {
            return Err(Error::Dimension(format!(
                "h_x has {} columns, h_z has {}",
                h_x.cols(),
                h_z.cols()
            )));
        }
        let (l_x, l_z) = compute_logicals(&h_x, &h_z)?;
        let n = h_x.cols();
        let k = l_x.rows();
        Ok(Self {
            name: name.to_string(),
            h_x,
            h_z,
            l_x,
            l_z,
            n,
            k,
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// True iff every X check commutes with every Z check.
    pub fn validate_sip(&self) -> bool {
        sip_holds(&self.h_x, &self.h_z)
    }

    /// Checks that detect errors of the given side (h_z for X errors).
    pub fn decoding_matrix(&self, side: Side) -> &BitMatrix {
        match side {
            Side::X => &self.h_z,
            Side::Z => &self.h_x,
        }
    }

    /// Stabilizer rows equivalent to the identity on this side's errors.
    pub fn stabilizer_matrix(&self, side: Side) -> &BitMatrix {
        match side {
            Side::X => &self.h_x,
            Side::Z => &self.h_z,
        }
    }

    /// Logical generators that anticommute with this side's miscorrections.
    pub fn logical_matrix(&self, side: Side) -> &BitMatrix {
        match side {
            Side::X => &self.l_z,
            Side::Z => &self.l_x,
        }
    }
}

/// True iff h_x · h_zᵀ == 0 (mod 2), i.e. all checks commute.
pub fn sip_holds(h_x: &BitMatrix, h_z: &BitMatrix) -> bool {
    first_sip_violation(h_x, h_z).is_none()
}

fn first_sip_violation(h_x: &BitMatrix, h_z: &BitMatrix) -> Option<(usize, usize)> {
    let product = h_x.mat_mul(&h_z.transpose()).ok()?;
    if product.is_zero() {
        return None;
    }
    for i in 0..product.rows() {
        if let Some(&j) = product.row(i).ones().first() {
            return Some((i, j));
        }
    }
    None
}

/// Generalized bicycle code from two same-size circulant specs.
pub fn gb_construct(a: &CirculantSpec, b: &CirculantSpec) -> Result<CssCode> {
    gb_construct_with_deletion(a, b, &[], &[])
}

/// Generalized bicycle with caller-chosen check rows removed from each side
/// (row deletion keeps commutation; it only enlarges the code space).
pub fn gb_construct_with_deletion(
    a: &CirculantSpec,
    b: &CirculantSpec,
    delete_x: &[usize],
    delete_z: &[usize],
) -> Result<CssCode> {
    if a.size() != b.size() {
        return Err(Error::Dimension(format!(
            "circulant sizes differ: {} vs {}",
            a.size(),
            b.size()
        )));
    }
    let am = circulant_from_spec(a);
    let bm = circulant_from_spec(b);
    let mut h_x = am.hstack(&bm)?;
    let mut h_z = bm.transpose().hstack(&am.transpose())?;
    if !delete_x.is_empty() {
        h_x = h_x.delete_rows(delete_x)?;
    }
    if !delete_z.is_empty() {
        h_z = h_z.delete_rows(delete_z)?;
    }
    CssCode::from_checks("gb", h_x, h_z)
}

/// Kronecker product over GF(2).
fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let mut out = BitMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for k in a.row(i).ones() {
            for j in 0..b.rows() {
                for l in b.row(j).ones() {
                    out.set(i * b.rows() + j, k * b.cols() + l, true);
                }
            }
        }
    }
    out
}

/// Hypergraph product of two classical parity-check matrices:
/// `h_x = [h1⊗I | I⊗h2ᵀ]`, `h_z = [I⊗h2 | h1ᵀ⊗I]`, n = n₁n₂ + m₁m₂.
pub fn hp_construct(h1: &BitMatrix, h2: &BitMatrix) -> Result<CssCode> {
    let (m1, n1) = (h1.rows(), h1.cols());
    let (m2, n2) = (h2.rows(), h2.cols());
    let h_x = kron(h1, &BitMatrix::identity(n2))
        .hstack(&kron(&BitMatrix::identity(m1), &h2.transpose()))?;
    let h_z = kron(&BitMatrix::identity(n1), h2)
        .hstack(&kron(&h1.transpose(), &BitMatrix::identity(m2)))?;
    CssCode::from_checks("hp", h_x, h_z)
}

/// Quasi-cyclic parity-check matrix from a table of circulant-permutation
/// exponents; `None` entries are q×q zero blocks.
pub fn qc_ldpc_construct(table: &[Vec<Option<usize>>], q: usize) -> Result<BitMatrix> {
    if q == 0 || table.is_empty() {
        return Err(Error::InvalidArgument(
            "exponent table must be nonempty with q > 0".into(),
        ));
    }
    let cols_blocks = table[0].len();
    if table.iter().any(|r| r.len() != cols_blocks) {
        return Err(Error::InvalidArgument("ragged exponent table".into()));
    }
    let mut m = BitMatrix::zeros(table.len() * q, cols_blocks * q);
    for (bi, row) in table.iter().enumerate() {
        for (bj, entry) in row.iter().enumerate() {
            if let Some(e) = *entry {
                if e >= q {
                    return Err(Error::InvalidArgument(format!(
                        "exponent {e} >= q = {q} at block ({bi},{bj})"
                    )));
                }
                for r in 0..q {
                    m.set(bi * q + r, bj * q + (r + e) % q, true);
                }
            }
        }
    }
    Ok(m)
}

/// Extends the row space of `modulo` to span ker(`kernel_of`); the added
/// vectors form a basis of the quotient ker/rowspace.
fn quotient_basis(kernel_of: &BitMatrix, modulo: &BitMatrix) -> Vec<BitVec> {
    let ech = modulo.echelon();
    let kern = kernel_of.kernel_basis();
    let mut kept: Vec<(usize, BitVec)> = Vec::new(); // (leading column, vector)
    for i in 0..kern.rows() {
        let mut w = kern.row(i);
        ech.reduce(&mut w);
        for (lead, vec) in &kept {
            if w.get(*lead) {
                w.xor_assign(vec);
            }
        }
        if let Some(&lead) = w.ones().first() {
            let at = kept.partition_point(|(l, _)| *l < lead);
            kept.insert(at, (lead, w));
        }
    }
    kept.into_iter().map(|(_, v)| v).collect()
}

/// Paired logical bases: `l_x` spans ker(h_z) modulo rowspace(h_x), `l_z`
/// spans ker(h_x) modulo rowspace(h_z), normalized so l_x · l_zᵀ = I.
pub fn compute_logicals(h_x: &BitMatrix, h_z: &BitMatrix) -> Result<(BitMatrix, BitMatrix)> {
    if let Some((i, j)) = first_sip_violation(h_x, h_z) {
        return Err(Error::SipViolation { row_x: i, row_z: j });
    }
    let n = h_x.cols();
    let lx_rows = quotient_basis(h_z, h_x);
    let lz_rows = quotient_basis(h_x, h_z);
    if lx_rows.len() != lz_rows.len() {
        return Err(Error::Dimension(format!(
            "logical space dimensions disagree: {} vs {}",
            lx_rows.len(),
            lz_rows.len()
        )));
    }
    let from_rows = |rows: Vec<BitVec>| -> Result<BitMatrix> {
        if rows.is_empty() {
            Ok(BitMatrix::zeros(0, n))
        } else {
            BitMatrix::from_rows(&rows)
        }
    };
    let l_x = from_rows(lx_rows)?;
    let l_z = from_rows(lz_rows)?;
    let pairing = l_x.mat_mul(&l_z.transpose())?;
    let p_inv = pairing
        .inverse()
        .expect("logical pairing is nondegenerate when the checks commute");
    let l_x = p_inv.mat_mul(&l_x)?;
    Ok((l_x, l_z))
}

/// Parsed key=value code description (see `CodeSpec::parse` for the keys).
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub name: String,
    pub kind: SpecKind,
}

#[derive(Clone, Debug)]
pub enum SpecKind {
    Gb {
        circulant: usize,
        a_exp: Vec<usize>,
        b_exp: Vec<usize>,
        delete_x: Vec<usize>,
        delete_z: Vec<usize>,
    },
    Hp {
        h1: PathBuf,
        h2: PathBuf,
    },
    Qc {
        q: usize,
        table: Vec<Vec<Option<usize>>>,
    },
    Alist {
        h: PathBuf,
    },
}

/// What a spec builds: a CSS code, or a classical matrix (QC constituents).
#[derive(Clone, Debug)]
pub enum BuiltCode {
    Css(CssCode),
    Classical(BitMatrix),
}

fn parse_usize_list(value: &str) -> Result<Vec<usize>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("expected integer list entry, got {t:?}")))
        })
        .collect()
}

impl CodeSpec {
    /// Parses key=value lines ('#' starts a comment). Keys:
    /// `type=gb|hp|qc|alist` (required), `name=...`;
    /// gb: `circulant=L`, `a_exp=e,e,...`, `b_exp=e,e,...`,
    ///     optional `delete_x=r,r,...`, `delete_z=r,r,...`;
    /// hp: `h1=path.alist`, `h2=path.alist` (relative to `base_dir`);
    /// qc: `q=Q`, `table=e,e,-,e;e,-,e,e` (rows split by ';', `-` = zero block);
    /// alist: `h=path.alist` (classical matrix loaded verbatim).
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("code spec line {}: expected key=value", lineno + 1))
            })?;
            if kv.insert(key.trim().to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parse(format!(
                    "code spec: duplicate key {:?}",
                    key.trim()
                )));
            }
        }
        let mut take = |k: &str| kv.remove(k);
        let ty = take("type")
            .ok_or_else(|| Error::Parse("code spec: missing type=".into()))?;
        let name = take("name").unwrap_or_else(|| ty.clone());
        let require = |opt: Option<String>, k: &str| {
            opt.ok_or_else(|| Error::Parse(format!("code spec: type={ty} requires {k}=")))
        };
        let kind = match ty.as_str() {
            "gb" => {
                let circulant = require(take("circulant"), "circulant")?
                    .parse::<usize>()
                    .map_err(|_| Error::Parse("code spec: bad circulant size".into()))?;
                SpecKind::Gb {
                    circulant,
                    a_exp: parse_usize_list(&require(take("a_exp"), "a_exp")?)?,
                    b_exp: parse_usize_list(&require(take("b_exp"), "b_exp")?)?,
                    delete_x: parse_usize_list(&take("delete_x").unwrap_or_default())?,
                    delete_z: parse_usize_list(&take("delete_z").unwrap_or_default())?,
                }
            }
            "hp" => SpecKind::Hp {
                h1: base_dir.join(require(take("h1"), "h1")?),
                h2: base_dir.join(require(take("h2"), "h2")?),
            },
            "qc" => {
                let q = require(take("q"), "q")?
                    .parse::<usize>()
                    .map_err(|_| Error::Parse("code spec: bad q".into()))?;
                let table = require(take("table"), "table")?
                    .split(';')
                    .map(|row| {
                        row.split(',')
                            .map(|t| match t.trim() {
                                "-" => Ok(None),
                                e => e
                                    .parse::<usize>()
                                    .map(Some)
                                    .map_err(|_| {
                                        Error::Parse(format!(
                                            "code spec: bad table entry {t:?}"
                                        ))
                                    }),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SpecKind::Qc { q, table }
            }
            "alist" => SpecKind::Alist {
                h: base_dir.join(require(take("h"), "h")?),
            },
            other => {
                return Err(Error::Parse(format!(
                    "code spec: unknown type {other:?} (expected gb, hp, qc, or alist)"
                )))
            }
        };
        if let Some(extra) = kv.keys().next() {
            return Err(Error::Parse(format!("code spec: unknown key {extra:?}")));
        }
        Ok(Self { name, kind })
    }

    /// Loads a spec file; unnamed specs take the file stem as their name.
    /// Files with an `.alist` extension load directly as classical matrices.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.extension().is_some_and(|e| e == "alist") {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("alist")
                .to_string();
            return Ok(Self {
                name,
                kind: SpecKind::Alist { h: path.to_path_buf() },
            });
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("code spec {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut spec = Self::parse(&text, base)?;
        if !text.contains("name=") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                spec.name = stem.to_string();
            }
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<BuiltCode> {
        match &self.kind {
            SpecKind::Gb {
                circulant,
                a_exp,
                b_exp,
                delete_x,
                delete_z,
            } => {
                let a = CirculantSpec::new(*circulant, a_exp)?;
                let b = CirculantSpec::new(*circulant, b_exp)?;
                let code = gb_construct_with_deletion(&a, &b, delete_x, delete_z)?
                    .with_name(&self.name);
                Ok(BuiltCode::Css(code))
            }
            SpecKind::Hp { h1, h2 } => {
                let m1 = crate::alist::load_alist(h1)?;
                let m2 = crate::alist::load_alist(h2)?;
                Ok(BuiltCode::Css(hp_construct(&m1, &m2)?.with_name(&self.name)))
            }
            SpecKind::Qc { q, table } => {
                Ok(BuiltCode::Classical(qc_ldpc_construct(table, *q)?))
            }
            SpecKind::Alist { h } => Ok(BuiltCode::Classical(crate::alist::load_alist(h)?)),
        }
    }
}
