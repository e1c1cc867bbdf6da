//! Named integer sequences over the fire-count formulas, reference values
//! for them, first differences, and text emitters (OEIS b-file, CSV, JSON).
//!
//! Indexing is 1-based throughout.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formulas;
use crate::numerics::{Nat, TreeParams};

pub(crate) fn ser_nat<S: Serializer>(x: &Nat, s: S) -> std::result::Result<S::Ok, S::Error> {
    let num: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
    num.serialize(s)
}

pub(crate) fn ser_nats<S: Serializer>(xs: &[Nat], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        let num: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&num)?;
    }
    seq.end()
}

/// Which family a sequence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `g0(m) = root_fires(mk)`
    BlockRootFires,
    /// `G(m) = total_fires(mk)`
    BlockTotalFires,
    /// `d0(m) = g0(m+1) - g0(m)`
    RootFiresDiff,
    /// `D(m) = G(m+1) - G(m)`
    TotalFiresDiff,
    /// total fires for `repunit(n)` chips
    RepunitTotalFires,
    /// root fires for `repunit(n)` chips
    RepunitRootFires,
    /// `a(n) = k a(n-1) + n`
    A,
    /// `b(n) = n k^{n-1} + b(n-1)`
    B,
    /// `F(N)` indexed by pile size
    TotalFires,
    /// `f0(N)` indexed by pile size
    RootFires,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 10] = [
        SequenceKind::BlockRootFires,
        SequenceKind::BlockTotalFires,
        SequenceKind::RootFiresDiff,
        SequenceKind::TotalFiresDiff,
        SequenceKind::RepunitTotalFires,
        SequenceKind::RepunitRootFires,
        SequenceKind::A,
        SequenceKind::B,
        SequenceKind::TotalFires,
        SequenceKind::RootFires,
    ];

    pub const NAMES: [&'static str; 10] = [
        "g0",
        "G",
        "d0",
        "D",
        "F-special",
        "f0-special",
        "a",
        "b",
        "F",
        "f0",
    ];

    pub fn name(self) -> &'static str {
        let idx = Self::ALL.iter().position(|&k| k == self).expect("listed");
        Self::NAMES[idx]
    }

    /// Sequence obtained by differencing, where it has its own name.
    pub fn difference(self) -> Option<SequenceKind> {
        match self {
            SequenceKind::BlockRootFires => Some(SequenceKind::RootFiresDiff),
            SequenceKind::BlockTotalFires => Some(SequenceKind::TotalFiresDiff),
            SequenceKind::RepunitTotalFires => Some(SequenceKind::B),
            _ => None,
        }
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canonical = match s {
            "F_special" | "Fspecial" => "F-special",
            "f0_special" | "f0special" => "f0-special",
            "F_raw" => "F",
            "f0_raw" => "f0",
            other => other,
        };
        Self::NAMES
            .iter()
            .position(|&n| n == canonical)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| Error::UnknownSequence(s.to_string()))
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SequenceKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SequenceId {
    pub kind: SequenceKind,
    pub k: TreeParams,
}

impl SequenceId {
    pub fn new(kind: SequenceKind, k: TreeParams) -> Self {
        SequenceId { kind, k }
    }

    /// Term at a 1-based index.
    pub fn term(self, index: u64) -> Result<Nat> {
        if index == 0 {
            return Err(Error::IndexOutOfDomain {
                sequence: self.to_string(),
                index,
            });
        }
        let t = self.k;
        let m = Nat::from(index);
        let n = usize::try_from(index).map_err(|_| Error::IndexOutOfDomain {
            sequence: self.to_string(),
            index,
        })?;
        Ok(match self.kind {
            SequenceKind::BlockRootFires => formulas::block_root_fires(&m, t),
            SequenceKind::BlockTotalFires => formulas::block_total_fires(&m, t),
            SequenceKind::RootFiresDiff => Nat::from(formulas::root_fires_diff(&m, t)),
            SequenceKind::TotalFiresDiff => formulas::total_fires_diff(&m, t),
            SequenceKind::RepunitTotalFires => formulas::repunit_total_fires(n, t),
            SequenceKind::RepunitRootFires => formulas::repunit_root_fires(n, t),
            SequenceKind::A => formulas::a_seq(n, t),
            SequenceKind::B => formulas::b_seq(n, t),
            SequenceKind::TotalFires => formulas::total_fires(&m, t),
            SequenceKind::RootFires => formulas::root_fires(&m, t),
        })
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.k)
    }
}

/// Contiguous run of terms. `order` counts how many times the generated
/// sequence has been differenced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceWindow {
    pub id: SequenceId,
    pub order: u32,
    pub start: u64,
    #[serde(serialize_with = "ser_nats")]
    pub values: Vec<Nat>,
}

impl SequenceWindow {
    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.values.len() as u64).map(move |i| self.start + i)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, &Nat)> + '_ {
        self.indices().zip(self.values.iter())
    }
}

pub fn generate(id: SequenceId, start: u64, count: usize) -> Result<SequenceWindow> {
    if count == 0 {
        return Err(Error::WindowTooShort { min: 1, len: 0 });
    }
    let values = (0..count as u64)
        .map(|i| id.term(start + i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceWindow {
        id,
        order: 0,
        start,
        values,
    })
}

/// First differences: output term `i` is `values[i+1] - values[i]`, kept at
/// the same start index. A decrease is reported as an error since every
/// family here is nondecreasing.
pub fn difference(window: &SequenceWindow) -> Result<SequenceWindow> {
    if window.values.len() < 2 {
        return Err(Error::WindowTooShort {
            min: 2,
            len: window.values.len(),
        });
    }
    let values = window
        .values
        .windows(2)
        .zip(window.indices())
        .map(|(pair, index)| {
            if pair[1] < pair[0] {
                Err(Error::NegativeDifference { index })
            } else {
                Ok(&pair[1] - &pair[0])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceWindow {
        id: window.id,
        order: window.order + 1,
        start: window.start,
        values,
    })
}

/// One `index value` line per term.
pub fn emit_bfile<W: Write>(window: &SequenceWindow, sink: &mut W) -> Result<()> {
    if window.values.is_empty() {
        return Err(Error::WindowTooShort { min: 1, len: 0 });
    }
    for (index, value) in window.pairs() {
        writeln!(sink, "{index} {value}")?;
    }
    Ok(())
}

pub fn emit_csv<W: Write>(window: &SequenceWindow, sink: &mut W, header: bool) -> Result<()> {
    if header {
        writeln!(sink, "index,value")?;
    }
    for (index, value) in window.pairs() {
        writeln!(sink, "{index},{value}")?;
    }
    Ok(())
}

/// JSON array of `[index, value]` pairs, values as plain JSON integers.
pub fn render_json(window: &SequenceWindow) -> String {
    let mut out = String::from("[");
    for (i, (index, value)) in window.pairs().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("[{index},{value}]"));
    }
    out.push(']');
    out
}

pub fn emit_json<W: Write>(window: &SequenceWindow, sink: &mut W) -> Result<()> {
    writeln!(sink, "{}", render_json(window))?;
    Ok(())
}

/// Where a reference value set comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureOrigin {
    /// A row of one of the four small reference tables, named after the
    /// tabulated quantity (`g0`, `G`, `D`, `a`).
    TableRow { table: &'static str },
    /// A printed prefix of an OEIS sequence.
    Listing { oeis: &'static str },
}

impl fmt::Display for FixtureOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureOrigin::TableRow { table } => write!(f, "{table} table"),
            FixtureOrigin::Listing { oeis } => write!(f, "{oeis} listing"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub origin: FixtureOrigin,
    /// Matching OEIS entry for table rows, where one exists.
    pub oeis: Option<&'static str>,
    /// Offset caveats relative to OEIS.
    pub note: Option<&'static str>,
    pub window: SequenceWindow,
}

const G0_TABLE: [[u64; 10]; 5] = [
    [0, 1, 2, 4, 5, 7, 8, 11, 12, 14],
    [0, 1, 2, 3, 5, 6, 7, 9, 10, 11],
    [0, 1, 2, 3, 4, 6, 7, 8, 9, 11],
    [0, 1, 2, 3, 4, 5, 7, 8, 9, 10],
    [0, 1, 2, 3, 4, 5, 6, 8, 9, 10],
];

const BIG_G_TABLE: [[u64; 10]; 5] = [
    [0, 1, 2, 6, 7, 11, 12, 23, 24, 28],
    [0, 1, 2, 3, 8, 9, 10, 15, 16, 17],
    [0, 1, 2, 3, 4, 10, 11, 12, 13, 19],
    [0, 1, 2, 3, 4, 5, 12, 13, 14, 15],
    [0, 1, 2, 3, 4, 5, 6, 14, 15, 16],
];

const BIG_D_TABLE: [[u64; 10]; 5] = [
    [1, 1, 4, 1, 4, 1, 11, 1, 4, 1],
    [1, 1, 1, 5, 1, 1, 5, 1, 1, 5],
    [1, 1, 1, 1, 6, 1, 1, 1, 6, 1],
    [1, 1, 1, 1, 1, 7, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 8, 1, 1, 1],
];

/// `a(n, k)` for `n = 1..=7`, `k = 2..=10`, with the OEIS entry per row.
const A_TABLE: [([u64; 7], &str); 9] = [
    ([1, 4, 11, 26, 57, 120, 247], "A000295"),
    ([1, 5, 18, 58, 179, 543, 1636], "A000340"),
    ([1, 6, 27, 112, 453, 1818, 7279], "A014825"),
    ([1, 7, 38, 194, 975, 4881, 24412], "A014827"),
    ([1, 8, 51, 310, 1865, 11196, 67183], "A014829"),
    ([1, 9, 66, 466, 3267, 22875, 160132], "A014830"),
    ([1, 10, 83, 668, 5349, 42798, 342391], "A014831"),
    ([1, 11, 102, 922, 8303, 74733, 672604], "A014832"),
    ([1, 12, 123, 1234, 12345, 123456, 1234567], "A014824"),
];

/// Printed sequence prefixes: (OEIS id, family, k, values from index 1).
const LISTINGS: [(&str, SequenceKind, u64, &[u64]); 10] = [
    (
        "A000295",
        SequenceKind::RepunitRootFires,
        2,
        &[0, 1, 4, 11, 26, 57, 120, 247, 502, 1013],
    ),
    (
        "A378724",
        SequenceKind::BlockRootFires,
        3,
        &[0, 1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15, 18],
    ),
    (
        "A091090",
        SequenceKind::RootFiresDiff,
        2,
        &[1, 1, 2, 1, 2, 1, 3, 1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1],
    ),
    (
        "A378725",
        SequenceKind::RootFiresDiff,
        3,
        &[
            1, 1, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 3, 1, 1, 2, 1, 1, 2, 1, 1, 3, 1,
        ],
    ),
    (
        "A376131",
        SequenceKind::BlockTotalFires,
        2,
        &[0, 1, 2, 6, 7, 11, 12, 23, 24, 28, 29, 40, 41, 45],
    ),
    (
        "A378726",
        SequenceKind::BlockTotalFires,
        3,
        &[
            0, 1, 2, 3, 8, 9, 10, 15, 16, 17, 22, 23, 24, 42, 43, 44, 49, 50, 51,
        ],
    ),
    (
        "A378727",
        SequenceKind::RepunitTotalFires,
        4,
        &[
            0, 1, 10, 67, 380, 1973, 9710, 46119, 213600, 970905, 4349650, 19262731,
        ],
    ),
    (
        "A378728",
        SequenceKind::RepunitTotalFires,
        5,
        &[
            0, 1, 12, 98, 684, 4395, 26856, 158692, 915528, 5187989, 28991700,
        ],
    ),
    (
        "A376132",
        SequenceKind::TotalFiresDiff,
        2,
        &[1, 1, 4, 1, 4, 1, 11, 1, 4, 1, 11, 1, 4, 1, 26],
    ),
    (
        "A378962",
        SequenceKind::TotalFiresDiff,
        3,
        &[1, 1, 1, 5, 1, 1, 5, 1, 1, 5, 1, 1, 18, 1, 1, 5, 1, 1, 5],
    ),
];

fn window_of(kind: SequenceKind, k: u64, values: &[u64]) -> SequenceWindow {
    SequenceWindow {
        id: SequenceId::new(kind, TreeParams::new(k).expect("fixture k >= 2")),
        order: 0,
        start: 1,
        values: values.iter().map(|&v| Nat::from(v)).collect(),
    }
}

fn note_for(oeis: &str) -> Option<&'static str> {
    match oeis {
        "A000295" => {
            Some("OEIS A000295 is offset by one: A000295(n + 1) is term n here (A125128 matches)")
        }
        "A000340" => Some("OEIS A000340 starts at index 0: A000340(n - 1) is term n here"),
        _ => None,
    }
}

/// Every reference value set: the four tables (g0, G, D for `k = 2..=6`,
/// `m = 1..=10`; a for `k = 2..=10`, `n = 1..=7`) and the printed prefixes.
pub fn reference_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    let tables = [
        ("g0", SequenceKind::BlockRootFires, &G0_TABLE),
        ("G", SequenceKind::BlockTotalFires, &BIG_G_TABLE),
        ("D", SequenceKind::TotalFiresDiff, &BIG_D_TABLE),
    ];
    for (table, kind, rows) in tables {
        for (row, k) in rows.iter().zip(2u64..) {
            out.push(Fixture {
                origin: FixtureOrigin::TableRow { table },
                oeis: None,
                note: None,
                window: window_of(kind, k, row),
            });
        }
    }
    for ((row, oeis), k) in A_TABLE.iter().zip(2u64..) {
        out.push(Fixture {
            origin: FixtureOrigin::TableRow { table: "a" },
            oeis: Some(oeis),
            note: note_for(oeis),
            window: window_of(SequenceKind::A, k, row),
        });
    }
    for (oeis, kind, k, values) in LISTINGS {
        out.push(Fixture {
            origin: FixtureOrigin::Listing { oeis },
            oeis: Some(oeis),
            note: note_for(oeis),
            window: window_of(kind, k, values),
        });
    }
    out
}

/// Distinct values of a window, ascending.
pub fn distinct_values(window: &SequenceWindow) -> Vec<Nat> {
    let mut v: Vec<Nat> = window
        .values
        .iter()
        .filter(|x| !x.is_zero())
        .cloned()
        .collect();
    v.sort();
    v.dedup();
    v
}
