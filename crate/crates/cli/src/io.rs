//! Graph files, profile CSV and the on-disk ball cache.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use morselab_core::{
    BallIndex, DefiningGraph, DivergenceProfile, DivergenceRow, GroupKind, Letter, Presentation, Rho,
};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<morselab_core::Error> for LoadError {
    fn from(e: morselab_core::Error) -> Self {
        LoadError::Validation(e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Parses `{"vertices": [...], "edges": [["u", "v"], ...]}`.
pub fn load_graph(text: &str) -> Result<DefiningGraph, LoadError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    Ok(DefiningGraph::from_named_edges(&doc.vertices, &doc.edges)?)
}

pub fn graph_to_json(g: &DefiningGraph) -> String {
    let edges: Vec<[&str; 2]> = g.edges().map(|(u, v)| [g.name(u), g.name(v)]).collect();
    serde_json::json!({ "vertices": g.names(), "edges": edges }).to_string()
}

/// A path to an existing file is read as JSON; anything else is treated as
/// a family name.
pub fn resolve_graph(reference: &str) -> Result<DefiningGraph, LoadError> {
    let path = Path::new(reference);
    if path.is_file() {
        return load_graph(&fs::read_to_string(path)?);
    }
    Ok(DefiningGraph::family(reference)?)
}

const COLUMNS: [&str; 8] = ["r", "n", "rho", "value", "pairs_examined", "capped", "witness_x", "witness_y"];

/// Writes a profile as CSV. A leading `#` line records the parameters so
/// that empty profiles round-trip. Witness columns are empty when the value
/// is `inf`; otherwise an empty word is the identity.
pub fn write_profile<W: Write>(out: W, p: &Presentation, profile: &DivergenceProfile) -> Result<(), LoadError> {
    let mut out = out;
    writeln!(out, "# n={} rho={} rmax={}", profile.n, profile.rho, profile.r_max)?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| LoadError::Io(io::Error::other(e));
    w.write_record(COLUMNS).map_err(csv_err)?;
    for row in &profile.rows {
        let value = row.value.map_or_else(|| "inf".to_string(), |v| v.to_string());
        let (wx, wy) = match &row.witness {
            Some((x, y)) => (p.format(x), p.format(y)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            row.r.to_string(),
            profile.n.to_string(),
            profile.rho.to_string(),
            value,
            row.pairs_examined.to_string(),
            row.capped.to_string(),
            wx,
            wy,
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn profile_to_csv(p: &Presentation, profile: &DivergenceProfile) -> String {
    let mut buf = Vec::new();
    write_profile(&mut buf, p, profile).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

fn header_field<'a>(header: &'a str, key: &str) -> Result<&'a str, LoadError> {
    header
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .ok_or_else(|| LoadError::Parse(format!("header lacks `{key}`")))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, LoadError> {
    s.parse().map_err(|_| LoadError::Parse(format!("bad {what} `{s}`")))
}

pub fn read_profile<R: Read>(mut input: R, p: &Presentation) -> Result<DivergenceProfile, LoadError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let (header, body) = text.split_once('\n').unwrap_or((&text, ""));
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| LoadError::Parse("missing `#` parameter line".into()))?;
    let n: u32 = parse_num(header_field(header, "n")?, "n")?;
    let rho: Rho = header_field(header, "rho")?.parse().map_err(LoadError::from)?;
    let r_max: u32 = parse_num(header_field(header, "rmax")?, "rmax")?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let columns = reader.headers().map_err(|e| LoadError::Parse(e.to_string()))?;
    if columns.iter().ne(COLUMNS) {
        return Err(LoadError::Parse(format!("unexpected columns {columns:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let rec = record.map_err(|e| LoadError::Parse(e.to_string()))?;
        if parse_num::<u32>(&rec[1], "n")? != n || rec[2].parse::<Rho>().map_err(LoadError::from)? != rho {
            return Err(LoadError::Parse("row parameters disagree with the header".into()));
        }
        let value = match &rec[3] {
            "inf" => None,
            v => Some(parse_num(v, "value")?),
        };
        let witness = match value {
            Some(_) => Some((p.parse(&rec[6])?, p.parse(&rec[7])?)),
            None => None,
        };
        rows.push(DivergenceRow {
            r: parse_num(&rec[0], "r")?,
            value,
            pairs_examined: parse_num(&rec[4], "pairs_examined")?,
            capped: parse_num(&rec[5], "capped")?,
            witness,
        });
    }
    Ok(DivergenceProfile { n, rho, r_max, rows })
}

const CACHE_MAGIC: &[u8; 8] = b"MLBALL\0\0";
const CACHE_VERSION: u32 = 1;

/// Ball cache rooted at `MORSELAB_CACHE_DIR`. Files are keyed by graph
/// fingerprint, group kind and radius; anything unreadable is a miss.
pub struct BallCache {
    dir: PathBuf,
}

impl BallCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BallCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os("MORSELAB_CACHE_DIR").map(BallCache::new)
    }

    pub fn path(&self, p: &Presentation, radius: u32) -> PathBuf {
        self.dir
            .join(format!("{:016x}-{}-r{radius}.ball", p.graph().fingerprint(), p.kind()))
    }

    pub fn load(&self, p: &Presentation, radius: u32) -> Option<BallIndex> {
        let bytes = fs::read(self.path(p, radius)).ok()?;
        decode_ball(&bytes, p, radius)
    }

    pub fn store(&self, ball: &BallIndex) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(ball.presentation(), ball.radius());
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, encode_ball(ball))?;
        fs::rename(tmp, path)
    }
}

fn kind_byte(kind: GroupKind) -> u8 {
    match kind {
        GroupKind::Racg => 0,
        GroupKind::Raag => 1,
    }
}

pub fn encode_ball(ball: &BallIndex) -> Vec<u8> {
    let p = ball.presentation();
    let mut out = Vec::new();
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&p.graph().fingerprint().to_le_bytes());
    out.push(kind_byte(p.kind()));
    out.extend_from_slice(&ball.radius().to_le_bytes());
    out.extend_from_slice(&(ball.len() as u64).to_le_bytes());
    for id in 0..ball.len() as u32 {
        let w = ball.word(id);
        out.push(w.len() as u8);
        out.extend(w.iter().map(|x| x.code()));
    }
    for &a in ball.adjacency() {
        out.extend_from_slice(&a.to_le_bytes());
    }
    out
}

struct Cursor<'a>(&'a [u8]);

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.0.len() < n {
            return None;
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Some(head)
    }

    fn array<const N: usize>(&mut self) -> Option<[u8; N]> {
        self.take(N)?.try_into().ok()
    }
}

pub fn decode_ball(bytes: &[u8], p: &Presentation, radius: u32) -> Option<BallIndex> {
    let mut c = Cursor(bytes);
    if c.take(8)? != CACHE_MAGIC
        || u32::from_le_bytes(c.array()?) != CACHE_VERSION
        || u64::from_le_bytes(c.array()?) != p.graph().fingerprint()
        || c.take(1)?[0] != kind_byte(p.kind())
        || u32::from_le_bytes(c.array()?) != radius
    {
        return None;
    }
    let count = u64::from_le_bytes(c.array()?) as usize;
    let mut words = Vec::with_capacity(count.min(bytes.len()));
    for _ in 0..count {
        let len = c.take(1)?[0] as usize;
        words.push(c.take(len)?.iter().map(|&b| Letter::from_code(b)).collect());
    }
    let mut adjacency = Vec::with_capacity(c.0.len() / 4);
    while !c.0.is_empty() {
        adjacency.push(u32::from_le_bytes(c.array()?));
    }
    BallIndex::from_parts(p, radius, words, adjacency).ok()
}

/// Builds a ball, going through the cache when `MORSELAB_CACHE_DIR` is set.
pub fn ball(p: &Presentation, radius: u32, budget: usize) -> morselab_core::Result<BallIndex> {
    let cache = BallCache::from_env();
    if let Some(ball) = cache.as_ref().and_then(|c| c.load(p, radius)) {
        return Ok(ball);
    }
    let ball = BallIndex::build(p, radius, budget)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&ball) {
            eprintln!("warning: could not write ball cache: {e}");
        }
    }
    Ok(ball)
}

#[cfg(test)]
mod tests {
    use super::*;
    use morselab_core::{sigma_profile, SigmaConfig, SubgroupField, SubgroupSpec};

    #[test]
    fn graph_documents() {
        let g = load_graph(r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert!(matches!(
            load_graph(r#"{"vertices":["a"],"edges":[["a","a"]]}"#),
            Err(LoadError::Validation(_))
        ));
        assert!(matches!(
            load_graph(r#"{"vertices":["a","a"],"edges":[]}"#),
            Err(LoadError::Validation(_))
        ));
        assert!(matches!(
            load_graph(r#"{"vertices":["a"],"edges":[["a","z"]]}"#),
            Err(LoadError::Validation(_))
        ));
        assert!(matches!(load_graph("{\"vertices\":"), Err(LoadError::Parse(_))));
        assert!(matches!(load_graph(r#"{"vertices":["a"],"edges":[["a"]]}"#), Err(LoadError::Parse(_))));
        let square = load_graph(
            r#"{"vertices":["a1","b1","a2","b2"],"edges":[["a1","b1"],["b1","a2"],["a2","b2"],["b2","a1"]]}"#,
        )
        .unwrap();
        assert_eq!(square, DefiningGraph::c4());
        assert_eq!(load_graph(&graph_to_json(&square)).unwrap(), square);
    }

    #[test]
    fn family_names_resolve() {
        assert_eq!(resolve_graph("gamma_d:2").unwrap(), DefiningGraph::gamma_d(2).unwrap());
        assert!(matches!(resolve_graph("no-such-graph"), Err(LoadError::Validation(_))));
    }

    #[test]
    fn csv_layout() {
        let p = Presentation::racg(DefiningGraph::c4());
        let ball = BallIndex::build(&p, 12, 100_000).unwrap();
        let s1 = p.graph().vertex_set(&["a1", "a2"]).unwrap();
        let field = SubgroupField::new(&ball, &SubgroupSpec::Special(s1)).unwrap();
        let profile = sigma_profile(&ball, &field, &SigmaConfig::new(2, Rho::ONE), &[2, 3]).unwrap();
        let text = profile_to_csv(&p, &profile);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# n=2 rho=1 rmax=12"));
        assert_eq!(lines.next(), Some("r,n,rho,value,pairs_examined,capped,witness_x,witness_y"));
        assert_eq!(read_profile(text.as_bytes(), &p).unwrap(), profile);
    }

    #[test]
    fn infinite_rows_render_as_inf() {
        let p = Presentation::racg(DefiningGraph::c4());
        let profile = DivergenceProfile {
            n: 3,
            rho: Rho::new(1, 2).unwrap(),
            r_max: 9,
            rows: vec![DivergenceRow { r: 2, value: None, pairs_examined: 0, capped: false, witness: None }],
        };
        let text = profile_to_csv(&p, &profile);
        assert!(text.lines().nth(2).unwrap().starts_with("2,3,1/2,inf,0,false,,"));
        assert_eq!(read_profile(text.as_bytes(), &p).unwrap(), profile);
    }

    #[test]
    fn cache_round_trip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = BallCache::new(dir.path());
        let p = Presentation::raag(DefiningGraph::p4());
        assert!(cache.load(&p, 3).is_none());
        let ball = BallIndex::build(&p, 3, 10_000).unwrap();
        cache.store(&ball).unwrap();
        let back = cache.load(&p, 3).unwrap();
        assert_eq!(back.len(), ball.len());
        assert_eq!(back.adjacency(), ball.adjacency());
        assert!(cache.load(&p, 4).is_none());
        assert!(cache.load(&Presentation::racg(DefiningGraph::p4()), 3).is_none());
        let mut bytes = encode_ball(&ball);
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        assert!(decode_ball(&bytes, &p, 3).is_none());
        assert!(decode_ball(&bytes[..bytes.len() / 2], &p, 3).is_none());
    }
}
