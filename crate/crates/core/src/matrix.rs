use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

/// Dense row-major matrix of ring elements. The ring is passed to every
/// arithmetic operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    /// Builds a matrix from explicit rows; an empty row list needs `cols`
    /// from the caller, so use [`Matrix::zeros`] for `0 x c` shapes.
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {ncols}", row.len())));
            }
            for e in row {
                if !ring.contains(&e) {
                    return Err(Error::MixedRing(ring.to_string()));
                }
                data.push(e);
            }
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    /// Parses rows of expressions, e.g. `&[&["x*y", "y^2"], &["-x^2", "-x*y"]]`.
    pub fn parse(ring: &Ring, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse_element(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(ring, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RingElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElement)> {
        self.data.iter().enumerate().map(move |(i, e)| (i / self.cols.max(1), i % self.cols.max(1), e))
    }

    pub fn is_zero(&self, ring: &Ring) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    pub fn mul(&self, other: &Matrix, ring: &Ring) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let t = ring.mul(a, b)?;
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &t)?;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RingElement, ring: &Ring) -> Result<Matrix> {
        self.map(|e| ring.mul(c, e))
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> Result<RingElement>) -> Result<Matrix> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Matrix, b: &Matrix, ring: &Ring) -> Matrix {
        let mut m = Matrix::zeros(ring, a.rows + b.rows, a.cols + b.cols);
        for (r, c, e) in a.entries() {
            m.set(r, c, e.clone());
        }
        for (r, c, e) in b.entries() {
            m.set(a.rows + r, a.cols + c, e.clone());
        }
        m
    }

    /// `[[a, b], [c, d]]`; shapes must agree.
    pub fn blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix, ring: &Ring) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("block sizes disagree".into()));
        }
        let mut m = Matrix::zeros(ring, a.rows + c.rows, a.cols + b.cols);
        for (blk, ro, co) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for (r, col, e) in blk.entries() {
                m.set(ro + r, co + col, e.clone());
            }
        }
        Ok(m)
    }

    /// `row[target] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, target: usize, src: usize, factor: &RingElement, ring: &Ring) -> Result<()> {
        if ring.is_zero(factor) {
            return Ok(());
        }
        for c in 0..self.cols {
            let s = self.get(src, c);
            if ring.is_zero(s) {
                continue;
            }
            let v = ring.add(self.get(target, c), &ring.mul(factor, s)?)?;
            self.set(target, c, v);
        }
        Ok(())
    }

    /// `col[target] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, target: usize, src: usize, factor: &RingElement, ring: &Ring) -> Result<()> {
        if ring.is_zero(factor) {
            return Ok(());
        }
        for r in 0..self.rows {
            let s = self.get(r, src);
            if ring.is_zero(s) {
                continue;
            }
            let v = ring.add(self.get(r, target), &ring.mul(factor, s)?)?;
            self.set(r, target, v);
        }
        Ok(())
    }

    pub fn scale_row(&mut self, r: usize, c: &RingElement, ring: &Ring) -> Result<()> {
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(r, j))?;
            self.set(r, j, v);
        }
        Ok(())
    }

    pub fn scale_col(&mut self, c: usize, f: &RingElement, ring: &Ring) -> Result<()> {
        for i in 0..self.rows {
            let v = ring.mul(f, self.get(i, c))?;
            self.set(i, c, v);
        }
        Ok(())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn remove_row(&mut self, r: usize) {
        self.data.drain(r * self.cols..(r + 1) * self.cols);
        self.rows -= 1;
    }

    pub fn remove_col(&mut self, c: usize) {
        let cols = self.cols;
        let mut idx = 0;
        self.data.retain(|_| {
            let keep = idx % cols != c;
            idx += 1;
            keep
        });
        self.cols -= 1;
    }

    /// Rows `start..` as a new matrix.
    pub fn rows_from(&self, start: usize) -> Matrix {
        Matrix {
            rows: self.rows - start,
            cols: self.cols,
            data: self.data[start * self.cols..].to_vec(),
        }
    }

    /// Columns `start..` as a new matrix.
    pub fn cols_from(&self, start: usize) -> Matrix {
        let mut data = Vec::new();
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..]);
        }
        Matrix { rows: self.rows, cols: self.cols - start, data }
    }

    /// Rank over a field ring.
    pub fn rank_over_field(&self, ring: &Ring) -> Result<usize> {
        if !ring.is_field() {
            return Err(Error::Capability { required: "a field", ring: ring.to_string() });
        }
        let field = ring.residue_field().unwrap();
        let rows = (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| ring.residue(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(field.rank(rows))
    }

    pub fn to_text(&self, ring: &Ring) -> String {
        (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = self.row(r).iter().map(|e| ring.display(e)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}
