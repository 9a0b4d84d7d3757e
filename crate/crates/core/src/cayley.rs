//! Breadth-first enumeration of finite matrix groups and their Cayley graphs.

use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::graph::Graph;
use crate::specialize::FMat;

pub const DEFAULT_LIMIT: usize = 1 << 27;

const TABLE_MAGIC: &[u8; 4] = b"CTXG";
const GRAPH_MAGIC: &[u8; 4] = b"CTXC";
const FORMAT_VERSION: u8 = 1;

/// Row-major entries, each as `k` little-endian base-`p` digits packed at
/// `bits(p - 1)` bits per digit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoder {
    dim: usize,
    p: u32,
    k: u32,
    width: u32,
    bytes: usize,
}

impl Encoder {
    pub fn new(field: &FieldCtx, dim: usize) -> Self {
        let p = field.p();
        let width = 32 - (p - 1).leading_zeros();
        let bits = dim * dim * field.k() as usize * width as usize;
        Encoder {
            dim,
            p,
            k: field.k(),
            width,
            bytes: bits.div_ceil(8),
        }
    }

    pub fn bytes_per_element(&self) -> usize {
        self.bytes
    }

    pub fn encode(&self, m: &FMat) -> Vec<u8> {
        debug_assert_eq!(m.dim(), self.dim);
        let mut out = vec![0u8; self.bytes];
        let mut bit = 0usize;
        for &x in m.entries() {
            let mut v = x.packed();
            for _ in 0..self.k {
                let mut d = v % self.p;
                v /= self.p;
                for _ in 0..self.width {
                    if d & 1 == 1 {
                        out[bit / 8] |= 1 << (bit % 8);
                    }
                    d >>= 1;
                    bit += 1;
                }
            }
        }
        out
    }

    pub fn decode(&self, bytes: &[u8]) -> FMat {
        let mut entries = Vec::with_capacity(self.dim * self.dim);
        let mut bit = 0usize;
        for _ in 0..self.dim * self.dim {
            let mut v = 0u32;
            let mut place = 1u32;
            for _ in 0..self.k {
                let mut d = 0u32;
                for w in 0..self.width {
                    if bytes[bit / 8] >> (bit % 8) & 1 == 1 {
                        d |= 1 << w;
                    }
                    bit += 1;
                }
                v += d * place;
                place *= self.p;
            }
            entries.push(Fe::from_packed(v));
        }
        FMat::from_entries(self.dim, entries).expect("decoded entry count matches")
    }
}

/// The enumerated group: elements in BFS order, deterministic within each layer.
#[derive(Clone, Debug)]
pub struct GroupTable {
    encoder: Encoder,
    data: Vec<u8>,
    depth: Vec<u32>,
    layers: Vec<usize>,
    gen_count: usize,
    index: HashMap<Vec<u8>, u32>,
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.encoder == other.encoder
            && self.data == other.data
            && self.depth == other.depth
            && self.layers == other.layers
            && self.gen_count == other.gen_count
    }
}

impl Eq for GroupTable {}

/// Enumerates `⟨gens⟩` by right multiplication, failing if it exceeds `limit`.
pub fn enumerate(gens: &[FMat], field: &FieldCtx, limit: usize) -> Result<GroupTable> {
    enumerate_with(gens, field, limit, false)
}

/// As [`enumerate`]; `allow_identity` admits identity generators.
pub fn enumerate_with(
    gens: &[FMat],
    field: &FieldCtx,
    limit: usize,
    allow_identity: bool,
) -> Result<GroupTable> {
    let first = gens
        .first()
        .ok_or_else(|| Error::InvalidConfig("no generators".into()))?;
    let dim = first.dim();
    for (i, g) in gens.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.dim(),
            });
        }
        if g.det(field).is_zero() {
            return Err(Error::Singular);
        }
        if !allow_identity && g.is_identity(field) {
            return Err(Error::IdentityGenerator(i));
        }
    }
    let encoder = Encoder::new(field, dim);
    let id = encoder.encode(&FMat::identity(field, dim));
    let mut table = GroupTable {
        encoder,
        data: id.clone(),
        depth: vec![0],
        layers: vec![1],
        gen_count: gens.len(),
        index: HashMap::from([(id, 0)]),
    };
    if limit == 0 {
        return Err(Error::CapExceeded { limit, partial: 1 });
    }

    let mut start = 0usize;
    let mut depth = 0u32;
    loop {
        let end = table.depth.len();
        let enc = &table.encoder;
        let index = &table.index;
        let data = &table.data;
        let bpe = enc.bytes_per_element();
        let mut fresh: Vec<Vec<u8>> = (start..end)
            .into_par_iter()
            .flat_map_iter(|i| {
                let m = enc.decode(&data[i * bpe..(i + 1) * bpe]);
                gens.iter()
                    .map(move |g| enc.encode(&m.mul(g, field)))
                    .filter(|code| !index.contains_key(code))
                    .collect::<Vec<_>>()
            })
            .collect();
        fresh.par_sort_unstable();
        fresh.dedup();
        if fresh.is_empty() {
            break;
        }
        if end + fresh.len() > limit {
            return Err(Error::CapExceeded {
                limit,
                partial: end + fresh.len(),
            });
        }
        depth += 1;
        table.layers.push(fresh.len());
        for code in fresh {
            let idx = table.depth.len() as u32;
            table.data.extend_from_slice(&code);
            table.depth.push(depth);
            table.index.insert(code, idx);
        }
        start = end;
    }
    Ok(table)
}

impl GroupTable {
    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn generator_count(&self) -> usize {
        self.gen_count
    }

    /// Word length (BFS depth) of element `i`.
    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    /// Number of elements at each word length.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.layers
    }

    pub fn code(&self, i: usize) -> &[u8] {
        let b = self.encoder.bytes_per_element();
        &self.data[i * b..(i + 1) * b]
    }

    pub fn element(&self, i: usize) -> FMat {
        self.encoder.decode(self.code(i))
    }

    pub fn membership(&self, m: &FMat) -> Option<usize> {
        if m.dim() != self.encoder.dim {
            return None;
        }
        self.index.get(&self.encoder.encode(m)).map(|&i| i as usize)
    }

    /// Raw element encodings in index order.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Binary cache: magic, version, header, then the table (little-endian).
    pub fn to_bytes(&self, header: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.data.len() + 5 * self.len() + header.len() + 64);
        out.extend_from_slice(TABLE_MAGIC);
        out.push(FORMAT_VERSION);
        put_u32(&mut out, header.len() as u32);
        out.extend_from_slice(header);
        let e = &self.encoder;
        for w in [e.dim as u32, e.p, e.k, self.gen_count as u32] {
            put_u32(&mut out, w);
        }
        put_u64(&mut out, self.len() as u64);
        put_u32(&mut out, self.layers.len() as u32);
        for &l in &self.layers {
            put_u64(&mut out, l as u64);
        }
        out.extend_from_slice(&self.data);
        for &d in &self.depth {
            put_u32(&mut out, d);
        }
        out
    }

    /// Inverse of [`GroupTable::to_bytes`]; returns the embedded header too.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Vec<u8>, GroupTable)> {
        let mut r = Reader::new(bytes);
        r.magic(TABLE_MAGIC)?;
        let hlen = r.u32()? as usize;
        let header = r.take(hlen)?.to_vec();
        let dim = r.u32()? as usize;
        let p = r.u32()?;
        let k = r.u32()?;
        let gen_count = r.u32()? as usize;
        if p < 2 || k == 0 {
            return Err(Error::Format("bad field parameters in table".into()));
        }
        let width = 32 - (p - 1).leading_zeros();
        let bits = dim * dim * k as usize * width as usize;
        let encoder = Encoder {
            dim,
            p,
            k,
            width,
            bytes: bits.div_ceil(8),
        };
        let n = r.u64()? as usize;
        let nl = r.u32()? as usize;
        let layers = (0..nl)
            .map(|_| r.u64().map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        if layers.iter().sum::<usize>() != n {
            return Err(Error::Format("layer sizes do not add up".into()));
        }
        let data = r
            .take(
                n.checked_mul(encoder.bytes)
                    .ok_or_else(|| Error::Format("table too large".into()))?,
            )?
            .to_vec();
        let depth = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        let index = (0..n)
            .map(|i| {
                (
                    data[i * encoder.bytes..(i + 1) * encoder.bytes].to_vec(),
                    i as u32,
                )
            })
            .collect::<HashMap<_, _>>();
        if index.len() != n {
            return Err(Error::Format("duplicate elements in table".into()));
        }
        Ok((
            header,
            GroupTable {
                encoder,
                data,
                depth,
                layers,
                gen_count,
                index,
            },
        ))
    }
}

/// `X(G, S)`: vertices are group elements, `g ~ g s` for `s ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    labels: Vec<String>,
    /// `right[v * k + j]` is the index of `v · s_j`.
    right: Vec<u32>,
    graph: Graph,
    /// Generators dropped because their image coincided with an earlier one.
    coincidences: Vec<(String, String)>,
}

/// Builds the Cayley graph of `table` for the labelled generators.
/// Coincident images are merged (the first label wins) and reported.
pub fn build_cayley(
    table: &GroupTable,
    gens: &[(String, FMat)],
    field: &FieldCtx,
) -> Result<CayleyGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut mats: Vec<FMat> = Vec::new();
    let mut coincidences = Vec::new();
    for (label, m) in gens {
        if let Some(j) = mats.iter().position(|x| x == m) {
            coincidences.push((label.clone(), labels[j].clone()));
            continue;
        }
        if m.is_identity(field) {
            return Err(Error::IdentityGenerator(labels.len()));
        }
        labels.push(label.clone());
        mats.push(m.clone());
    }
    for m in &mats {
        let inv = m.inverse(field)?;
        if !mats.contains(&inv) {
            return Err(Error::NotSymmetric);
        }
    }
    let k = mats.len();
    let n = table.len();
    let mut right = vec![0u32; n * k];
    right
        .par_chunks_mut(k.max(1))
        .enumerate()
        .try_for_each(|(v, row)| {
            let g = table.element(v);
            for (slot, m) in row.iter_mut().zip(&mats) {
                let idx = table.membership(&g.mul(m, field)).ok_or_else(|| {
                    Error::InvalidConfig("generator image leaves the enumerated group".into())
                })?;
                *slot = idx as u32;
            }
            Ok::<(), Error>(())
        })?;
    let adj = (0..n).map(|v| right[v * k..(v + 1) * k].to_vec()).collect();
    let graph = Graph::from_adjacency(adj);
    Ok(CayleyGraph {
        labels,
        right,
        graph,
        coincidences,
    })
}

impl CayleyGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of distinct generator images.
    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn coincidences(&self) -> &[(String, String)] {
        &self.coincidences
    }

    /// Index of `v · s_j`.
    pub fn step(&self, v: usize, j: usize) -> usize {
        self.right[v * self.k() + j] as usize
    }

    pub fn to_edge_list(&self) -> String {
        self.graph.to_edge_list()
    }

    /// Graphviz text; each edge carries the label of a generator taking `u` to `v`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        let k = self.k();
        for (u, v) in self.graph.edges() {
            let row = &self.right[u as usize * k..(u as usize + 1) * k];
            let j = row
                .iter()
                .position(|&x| x == v)
                .expect("edge comes from a generator");
            out.push_str(&format!("  {u} -- {v} [label=\"{}\"];\n", self.labels[j]));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_bytes(&self, header: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(GRAPH_MAGIC);
        out.push(FORMAT_VERSION);
        put_u32(&mut out, header.len() as u32);
        out.extend_from_slice(header);
        put_u64(&mut out, self.n() as u64);
        put_u32(&mut out, self.k() as u32);
        for l in &self.labels {
            put_str(&mut out, l);
        }
        put_u32(&mut out, self.coincidences.len() as u32);
        for (a, b) in &self.coincidences {
            put_str(&mut out, a);
            put_str(&mut out, b);
        }
        for &x in &self.right {
            put_u32(&mut out, x);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(Vec<u8>, CayleyGraph)> {
        let mut r = Reader::new(bytes);
        r.magic(GRAPH_MAGIC)?;
        let hlen = r.u32()? as usize;
        let header = r.take(hlen)?.to_vec();
        let n = r.u64()? as usize;
        let k = r.u32()? as usize;
        let labels = (0..k).map(|_| r.string()).collect::<Result<Vec<_>>>()?;
        let nc = r.u32()? as usize;
        let coincidences = (0..nc)
            .map(|_| Ok((r.string()?, r.string()?)))
            .collect::<Result<Vec<_>>>()?;
        let right = (0..n * k).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        if right.iter().any(|&v| v as usize >= n) {
            return Err(Error::Format("neighbor index out of range".into()));
        }
        let adj = (0..n).map(|v| right[v * k..(v + 1) * k].to_vec()).collect();
        Ok((
            header,
            CayleyGraph {
                labels,
                right,
                graph: Graph::from_adjacency(adj),
                coincidences,
            },
        ))
    }
}

/// `<prefix>-n<n>-q<q>-s<s>.grp`
pub fn cache_file_name(prefix: &str, n: usize, q: u32, s: u32) -> String {
    format!("{prefix}-n{n}-q{q}-s{s}.grp")
}

pub fn write_bytes(mut w: impl Write, bytes: &[u8]) -> Result<()> {
    w.write_all(bytes)?;
    Ok(())
}

pub fn read_bytes(mut r: impl Read) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    Ok(buf)
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format("truncated input".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| Error::Format("label is not UTF-8".into()))
    }

    fn magic(&mut self, want: &[u8; 4]) -> Result<()> {
        if self.take(4)? != want {
            return Err(Error::Format("bad magic".into()));
        }
        let v = self.take(1)?[0];
        if v != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {v}")));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::base_field;

    fn mat(f: &FieldCtx, rows: &[[u32; 2]; 2]) -> FMat {
        FMat::from_entries(
            2,
            rows.iter()
                .flatten()
                .map(|&x| f.from_int(x as i64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn encoder_round_trip() {
        for q in [2u64, 3, 4, 9, 5] {
            let f = base_field(q).unwrap();
            let enc = Encoder::new(&f, 2);
            for a in f.elements() {
                for b in f.elements() {
                    let m = FMat::from_entries(2, vec![a, b, b, a]).unwrap();
                    assert_eq!(enc.decode(&enc.encode(&m)), m);
                }
            }
        }
        let f2 = base_field(2).unwrap();
        assert_eq!(Encoder::new(&f2, 4).bytes_per_element(), 2);
    }

    #[test]
    fn sl2_of_2() {
        let f = base_field(2).unwrap();
        let x = mat(&f, &[[0, 1], [1, 0]]);
        let y = mat(&f, &[[0, 1], [1, 1]]);
        let yi = y.inverse(&f).unwrap();
        let t = enumerate(&[x.clone(), y.clone(), yi.clone()], &f, 100).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.membership(&FMat::identity(&f, 2)), Some(0));
        assert_eq!(t.layer_sizes().iter().sum::<usize>(), 6);
        let gens = vec![
            ("x".to_string(), x),
            ("y".to_string(), y),
            ("y^-1".to_string(), yi),
        ];
        let g = build_cayley(&t, &gens, &f).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.k(), 3);
        assert_eq!(g.graph().regular_degree(), Some(3));
        assert!(g.graph().is_connected() && g.graph().is_symmetric());
    }

    #[test]
    fn involution_on_c2_is_k2() {
        let f = base_field(3).unwrap();
        let m = mat(&f, &[[2, 0], [0, 2]]);
        let t = enumerate(std::slice::from_ref(&m), &f, 10).unwrap();
        assert_eq!(t.len(), 2);
        let g = build_cayley(&t, &[("z".into(), m)], &f).unwrap();
        assert_eq!(g.to_edge_list(), "0 1\n");
        assert_eq!(g.to_dot(), "graph cayley {\n  0 -- 1 [label=\"z\"];\n}\n");
    }

    #[test]
    fn identity_generator_handling() {
        let f = base_field(2).unwrap();
        let id = FMat::identity(&f, 2);
        assert!(matches!(
            enumerate(std::slice::from_ref(&id), &f, 10),
            Err(Error::IdentityGenerator(0))
        ));
        assert_eq!(enumerate_with(&[id], &f, 10, true).unwrap().len(), 1);
        assert!(enumerate(&[], &f, 10).is_err());
    }

    #[test]
    fn cap_is_an_error() {
        let f = base_field(3).unwrap();
        let x = mat(&f, &[[1, 1], [0, 1]]);
        let y = mat(&f, &[[1, 0], [1, 1]]);
        assert_eq!(
            enumerate(&[x.clone(), y.clone()], &f, 24).unwrap().len(),
            24
        );
        match enumerate(&[x, y], &f, 10) {
            Err(Error::CapExceeded { limit: 10, partial }) => assert!(partial > 10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_symmetric_set_is_rejected() {
        let f = base_field(3).unwrap();
        let x = mat(&f, &[[1, 1], [0, 1]]);
        let t = enumerate(std::slice::from_ref(&x), &f, 10).unwrap();
        assert!(matches!(
            build_cayley(&t, &[("x".into(), x)], &f),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn binary_round_trips() {
        let f = base_field(3).unwrap();
        let x = mat(&f, &[[1, 1], [0, 1]]);
        let y = mat(&f, &[[1, 0], [1, 1]]);
        let gens: Vec<FMat> = vec![
            x.clone(),
            x.inverse(&f).unwrap(),
            y.clone(),
            y.inverse(&f).unwrap(),
        ];
        let t = enumerate(&gens, &f, 100).unwrap();
        let bytes = t.to_bytes(b"hdr");
        let (h, back) = GroupTable::from_bytes(&bytes).unwrap();
        assert_eq!(h, b"hdr");
        assert_eq!(back, t);
        assert_eq!(back.membership(&y), t.membership(&y));
        let labelled: Vec<(String, FMat)> = ["a", "A", "b", "B"]
            .iter()
            .map(|s| s.to_string())
            .zip(gens)
            .collect();
        let g = build_cayley(&t, &labelled, &f).unwrap();
        let (h, back) = CayleyGraph::from_bytes(&g.to_bytes(b"xy")).unwrap();
        assert_eq!(h, b"xy");
        assert_eq!(back, g);
        assert!(GroupTable::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(GroupTable::from_bytes(&bad).is_err());
    }

    #[test]
    fn cache_names() {
        assert_eq!(cache_file_name("ctx", 2, 2, 1), "ctx-n2-q2-s1.grp");
    }
}
