//! Trace-driven set-associative LRU cache simulation.
//!
//! The kernels' memory behavior is replayed exactly: a trace generator walks
//! a matrix the same way the corresponding kernel does and emits one word
//! address per load/store, each tagged with the array stream it belongs to
//! (x entries, y entries, nonzero values, column metadata, row metadata).
//! [`simulate`] replays a trace against a cold cache and attributes every
//! miss to its stream, which is what the analytic bounds talk about.
//!
//! Arrays live at line-aligned bases in a flat address space, so no two
//! streams ever share a cache line and attribution stays exact. In a
//! multiple-piece trace every piece gets its own matrix regions while x and
//! y are shared, mirroring how the accumulating kernel reuses the vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, IcsrMatrix, ZigzagMatrix};

/// Cache geometry. `ways = 0` means fully associative; otherwise the line
/// count must split evenly into `ways`-wide sets and the set count must be a
/// power of two (the set index is taken from the low line-address bits).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CacheConfig {
    pub total_bytes: u64,
    pub line_bytes: u64,
    pub ways: u32,
    pub word_bytes: u64,
}

impl Default for CacheConfig {
    /// The experiment default: 64 KB, 2-way, 64-byte lines, 8-byte words.
    fn default() -> Self {
        CacheConfig {
            total_bytes: 64 * 1024,
            line_bytes: 64,
            ways: 2,
            word_bytes: 8,
        }
    }
}

impl CacheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.word_bytes == 0 || self.line_bytes == 0 || self.total_bytes == 0 {
            return Err(Error::Invalid("cache sizes must be positive".into()));
        }
        if !self.line_bytes.is_multiple_of(self.word_bytes) {
            return Err(Error::Invalid(format!(
                "line of {} bytes cannot hold whole {}-byte words",
                self.line_bytes, self.word_bytes
            )));
        }
        if !self.total_bytes.is_multiple_of(self.line_bytes) {
            return Err(Error::Invalid(format!(
                "cache of {} bytes is not a whole number of {}-byte lines",
                self.total_bytes, self.line_bytes
            )));
        }
        let lines = self.total_bytes / self.line_bytes;
        if self.ways > 0 {
            if u64::from(self.ways) > lines {
                return Err(Error::Invalid(format!(
                    "{} ways exceed the {} lines available",
                    self.ways, lines
                )));
            }
            if !lines.is_multiple_of(u64::from(self.ways)) {
                return Err(Error::Invalid(format!(
                    "{lines} lines do not split into {}-way sets",
                    self.ways
                )));
            }
            let sets = lines / u64::from(self.ways);
            if !sets.is_power_of_two() {
                return Err(Error::Invalid(format!(
                    "{sets} sets is not a power of two"
                )));
            }
        }
        Ok(())
    }
}

/// Which array an access touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    X,
    Y,
    /// The `y <- 0` writes opening a multiple-piece multiply. Same region as
    /// [`Stream::Y`], counted apart so their misses can be reported apart.
    YInit,
    Values,
    ColMeta,
    RowMeta,
}

/// One word access of a kernel replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub addr: u64,
    pub stream: Stream,
}

#[derive(Debug, Clone, Copy)]
struct Region {
    base: u64,
    words: u64,
}

impl Region {
    fn addr(&self, i: usize, word_bytes: u64) -> u64 {
        debug_assert!((i as u64) < self.words);
        self.base + i as u64 * word_bytes
    }

    fn contains(&self, addr: u64, word_bytes: u64) -> bool {
        addr >= self.base && addr < self.base + self.words * word_bytes
    }
}

/// Matrix-stream regions of one piece.
#[derive(Debug, Clone, Copy)]
struct MatrixRegions {
    values: Region,
    col_meta: Region,
    row_meta: Region,
}

/// Line-aligned placement of every array a trace touches: one matrix-region
/// triple per piece plus the shared x and y vectors.
#[derive(Debug, Clone)]
pub struct AddressMap {
    line_bytes: u64,
    word_bytes: u64,
    pieces: Vec<MatrixRegions>,
    x: Region,
    y: Region,
}

impl AddressMap {
    /// Lays out regions of the given word lengths: per piece
    /// `(values, col_meta, row_meta)`, then x, then y.
    fn layout(
        line_bytes: u64,
        word_bytes: u64,
        piece_words: &[(u64, u64, u64)],
        n_rows: u64,
        n_cols: u64,
    ) -> AddressMap {
        let mut cursor = 0u64;
        let mut place = |words: u64| {
            let base = cursor.next_multiple_of(line_bytes);
            cursor = base + words * word_bytes;
            Region { base, words }
        };
        let pieces = piece_words
            .iter()
            .map(|&(v, c, r)| MatrixRegions {
                values: place(v),
                col_meta: place(c),
                row_meta: place(r),
            })
            .collect();
        let x = place(n_cols);
        let y = place(n_rows);
        AddressMap {
            line_bytes,
            word_bytes,
            pieces,
            x,
            y,
        }
    }

    pub fn for_csr(a: &CsrMatrix, line_bytes: u64, word_bytes: u64) -> AddressMap {
        AddressMap::layout(
            line_bytes,
            word_bytes,
            &[(a.nnz() as u64, a.nnz() as u64, a.n_rows() as u64 + 1)],
            a.n_rows() as u64,
            a.n_cols() as u64,
        )
    }

    pub fn for_zigzag(a: &ZigzagMatrix, line_bytes: u64, word_bytes: u64) -> AddressMap {
        AddressMap::layout(
            line_bytes,
            word_bytes,
            &[(a.nnz() as u64, a.nnz() as u64, a.n_rows() as u64 + 1)],
            a.n_rows() as u64,
            a.n_cols() as u64,
        )
    }

    pub fn for_icsr(a: &IcsrMatrix, line_bytes: u64, word_bytes: u64) -> AddressMap {
        AddressMap::for_pieces(std::slice::from_ref(a), line_bytes, word_bytes)
    }

    /// Shared x/y, separate matrix regions per piece (in piece order).
    pub fn for_pieces(pieces: &[IcsrMatrix], line_bytes: u64, word_bytes: u64) -> AddressMap {
        let dims: Vec<(u64, u64, u64)> = pieces
            .iter()
            .map(|p| {
                (
                    p.nnz() as u64,
                    p.col_diff().len() as u64,
                    p.row_jump().len() as u64,
                )
            })
            .collect();
        let (n_rows, n_cols) = pieces
            .first()
            .map(|p| (p.n_rows() as u64, p.n_cols() as u64))
            .unwrap_or((0, 0));
        AddressMap::layout(line_bytes, word_bytes, &dims, n_rows, n_cols)
    }

    fn stream_region(&self, stream: Stream, addr: u64) -> Option<()> {
        let w = self.word_bytes;
        let hit = match stream {
            Stream::X => self.x.contains(addr, w),
            Stream::Y | Stream::YInit => self.y.contains(addr, w),
            Stream::Values => self.pieces.iter().any(|p| p.values.contains(addr, w)),
            Stream::ColMeta => self.pieces.iter().any(|p| p.col_meta.contains(addr, w)),
            Stream::RowMeta => self.pieces.iter().any(|p| p.row_meta.contains(addr, w)),
        };
        hit.then_some(())
    }

    fn x_access(&self, j: usize) -> Access {
        Access {
            addr: self.x.addr(j, self.word_bytes),
            stream: Stream::X,
        }
    }

    fn y_access(&self, i: usize, stream: Stream) -> Access {
        Access {
            addr: self.y.addr(i, self.word_bytes),
            stream,
        }
    }

    fn matrix_access(&self, piece: usize, stream: Stream, i: usize) -> Access {
        let regions = &self.pieces[piece];
        let region = match stream {
            Stream::Values => &regions.values,
            Stream::ColMeta => &regions.col_meta,
            Stream::RowMeta => &regions.row_meta,
            _ => unreachable!("x/y accesses use the shared regions"),
        };
        Access {
            addr: region.addr(i, self.word_bytes),
            stream,
        }
    }
}

/// Word trace of the plain CSR kernel: per row its row-start word, then per
/// nonzero the value, the column index and the x entry, then the y write;
/// one trailing row-start read closes the loop bound.
pub fn trace_csr(a: &CsrMatrix, map: &AddressMap) -> Vec<Access> {
    let mut t = Vec::with_capacity(3 * a.nnz() + 2 * a.n_rows() + 1);
    let cols = a.col_index();
    for i in 0..a.n_rows() {
        t.push(map.matrix_access(0, Stream::RowMeta, i));
        for k in a.row_range(i) {
            t.push(map.matrix_access(0, Stream::Values, k));
            t.push(map.matrix_access(0, Stream::ColMeta, k));
            t.push(map.x_access(cols[k]));
        }
        t.push(map.y_access(i, Stream::Y));
    }
    t.push(map.matrix_access(0, Stream::RowMeta, a.n_rows()));
    t
}

/// Word trace of the zig-zag kernel; identical shape to [`trace_csr`], but
/// the stored column order (reversed on odd rows) drives the x accesses.
pub fn trace_zigzag(a: &ZigzagMatrix, map: &AddressMap) -> Vec<Access> {
    let mut t = Vec::with_capacity(3 * a.nnz() + 2 * a.n_rows() + 1);
    let cols = a.col_index();
    for i in 0..a.n_rows() {
        t.push(map.matrix_access(0, Stream::RowMeta, i));
        for k in a.row_range(i) {
            t.push(map.matrix_access(0, Stream::Values, k));
            t.push(map.matrix_access(0, Stream::ColMeta, k));
            t.push(map.x_access(cols[k]));
        }
        t.push(map.y_access(i, Stream::Y));
    }
    t.push(map.matrix_access(0, Stream::RowMeta, a.n_rows()));
    t
}

/// Word trace of the incremental kernel (piece `piece` of the map): the
/// opening row-jump and column-diff reads, then per nonzero the value, the
/// x entry and the next column diff; on overflow the finished row's y word
/// and (when rows remain) the next row jump. Empty matrices touch nothing.
fn trace_icsr_piece(a: &IcsrMatrix, map: &AddressMap, piece: usize) -> Vec<Access> {
    if a.nnz() == 0 {
        return Vec::new();
    }
    let mut t = Vec::with_capacity(3 * a.nnz() + 2 * a.row_jump().len() + 1);
    let col_diff = a.col_diff();
    let row_jump = a.row_jump();
    let n = a.n_cols();
    t.push(map.matrix_access(piece, Stream::RowMeta, 0));
    t.push(map.matrix_access(piece, Stream::ColMeta, 0));
    let mut i = row_jump[0];
    let mut r = 1usize;
    let mut j = col_diff[0];
    for k in 0..a.nnz() {
        t.push(map.matrix_access(piece, Stream::Values, k));
        t.push(map.x_access(j));
        t.push(map.matrix_access(piece, Stream::ColMeta, k + 1));
        j += col_diff[k + 1];
        if j >= n {
            t.push(map.y_access(i, Stream::Y));
            j -= n;
            if r < row_jump.len() {
                i += row_jump[r];
                t.push(map.matrix_access(piece, Stream::RowMeta, r));
                r += 1;
            }
        }
    }
    t
}

pub fn trace_icsr(a: &IcsrMatrix, map: &AddressMap) -> Vec<Access> {
    trace_icsr_piece(a, map, 0)
}

/// Word trace of the multiple-piece multiply: the `y <- 0` initialization
/// sweep, then each piece's incremental trace in the given order. `order`
/// indexes into `pieces`, which must match the map's piece regions.
pub fn trace_multi(pieces: &[IcsrMatrix], order: &[usize], map: &AddressMap) -> Vec<Access> {
    let n_rows = pieces.first().map_or(0, |p| p.n_rows());
    let mut t: Vec<Access> = (0..n_rows)
        .map(|i| map.y_access(i, Stream::YInit))
        .collect();
    for &p in order {
        t.extend(trace_icsr_piece(&pieces[p], map, p));
    }
    t
}

/// Access and miss tallies of one stream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StreamCounts {
    pub accesses: u64,
    pub misses: u64,
}

/// Per-stream simulation outcome. The x/y miss counts are the quantities
/// the analytic bounds constrain; y-initialization misses are kept apart
/// but count toward the y total.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct MissReport {
    pub x: StreamCounts,
    pub y: StreamCounts,
    pub y_init: StreamCounts,
    pub values: StreamCounts,
    pub col_meta: StreamCounts,
    pub row_meta: StreamCounts,
}

impl MissReport {
    /// Misses on x-vector entries.
    pub fn phi_x(&self) -> u64 {
        self.x.misses
    }

    /// Misses on y-vector entries, initialization included.
    pub fn phi_y(&self) -> u64 {
        self.y.misses + self.y_init.misses
    }

    /// The vector-miss total the bounds speak about.
    pub fn phi(&self) -> u64 {
        self.phi_x() + self.phi_y()
    }

    /// Misses on the matrix's own arrays (values plus both metadata streams).
    pub fn matrix_misses(&self) -> u64 {
        self.values.misses + self.col_meta.misses + self.row_meta.misses
    }

    pub fn total_misses(&self) -> u64 {
        self.phi() + self.matrix_misses()
    }

    pub fn total_accesses(&self) -> u64 {
        self.x.accesses
            + self.y.accesses
            + self.y_init.accesses
            + self.values.accesses
            + self.col_meta.accesses
            + self.row_meta.accesses
    }

    fn bucket(&mut self, stream: Stream) -> &mut StreamCounts {
        match stream {
            Stream::X => &mut self.x,
            Stream::Y => &mut self.y,
            Stream::YInit => &mut self.y_init,
            Stream::Values => &mut self.values,
            Stream::ColMeta => &mut self.col_meta,
            Stream::RowMeta => &mut self.row_meta,
        }
    }
}

/// Replays a trace against a cold cache. Writes allocate like reads. Every
/// access must fall inside the region of its tagged stream.
pub fn simulate(trace: &[Access], map: &AddressMap, cfg: &CacheConfig) -> Result<MissReport> {
    cfg.validate()?;
    if cfg.line_bytes != map.line_bytes || cfg.word_bytes != map.word_bytes {
        return Err(Error::Invalid(
            "address map was laid out for a different line/word size".into(),
        ));
    }
    let lines = cfg.total_bytes / cfg.line_bytes;
    let (n_sets, ways) = if cfg.ways == 0 {
        (1u64, lines as usize)
    } else {
        (lines / u64::from(cfg.ways), cfg.ways as usize)
    };

    // (line tag, last-use tick) per way; linear scans are fine at these sizes
    let mut sets: Vec<Vec<(u64, u64)>> = vec![Vec::with_capacity(ways); n_sets as usize];
    let mut tick = 0u64;
    let mut report = MissReport::default();

    for acc in trace {
        if map.stream_region(acc.stream, acc.addr).is_none() {
            return Err(Error::Invalid(format!(
                "access at {:#x} is outside the {:?} stream's region",
                acc.addr, acc.stream
            )));
        }
        tick += 1;
        let line = acc.addr / cfg.line_bytes;
        let set = &mut sets[(line & (n_sets - 1)) as usize];
        let counts = report.bucket(acc.stream);
        counts.accesses += 1;
        if let Some(slot) = set.iter_mut().find(|(tag, _)| *tag == line) {
            slot.1 = tick;
        } else {
            counts.misses += 1;
            if set.len() == ways {
                let lru = set
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, (_, at))| *at)
                    .map(|(i, _)| i)
                    .expect("full set is non-empty");
                set.swap_remove(lru);
            }
            set.push((line, tick));
        }
    }
    Ok(report)
}

/// Miss ratios of a reordered run against a baseline run: x, y and x+y over
/// the vector streams only, `total` over everything including the matrix
/// streams. A zero-miss baseline stream reports 1.0 and sets `degenerate`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalizedReport {
    pub x: f64,
    pub y: f64,
    pub xy: f64,
    pub total: f64,
    pub degenerate: bool,
}

pub fn report_normalized(reordered: &MissReport, baseline: &MissReport) -> NormalizedReport {
    let mut degenerate = false;
    let mut ratio = |num: u64, den: u64| {
        if den == 0 {
            degenerate = true;
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    let x = ratio(reordered.phi_x(), baseline.phi_x());
    let y = ratio(reordered.phi_y(), baseline.phi_y());
    let xy = ratio(reordered.phi(), baseline.phi());
    let total = ratio(reordered.total_misses(), baseline.total_misses());
    NormalizedReport {
        x,
        y,
        xy,
        total,
        degenerate,
    }
}
