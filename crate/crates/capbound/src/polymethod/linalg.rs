//! Dense matrices over `F_q` with just enough elimination for rank and
//! null space computations. Row-major `u64` residues.

use crate::ffield::FieldElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FMatrix {
    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Self {
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        FieldElement::from_residue(self.data[r * self.cols + c], self.modulus)
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.modulus(), self.modulus, "entry from a different field");
        self.data[r * self.cols + c] = v.value();
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.data[r * self.cols + c] == 0))
    }

    pub fn diagonal_nonzero_count(&self) -> usize {
        (0..self.rows.min(self.cols))
            .filter(|&i| self.data[i * self.cols + i] != 0)
            .count()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let q = self.modulus;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.data[r * self.cols + col] != 0) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = FieldElement::from_residue(self.data[row * self.cols + col], q)
                .inv()
                .expect("pivot is nonzero");
            for c in col..self.cols {
                let v = FieldElement::from_residue(self.data[row * self.cols + c], q);
                self.data[row * self.cols + c] = v.mul(inv).value();
            }
            for r in 0..self.rows {
                if r == row || self.data[r * self.cols + col] == 0 {
                    continue;
                }
                let factor = FieldElement::from_residue(self.data[r * self.cols + col], q);
                for c in col..self.cols {
                    let base = FieldElement::from_residue(self.data[row * self.cols + c], q);
                    let cur = FieldElement::from_residue(self.data[r * self.cols + c], q);
                    self.data[r * self.cols + c] = cur.sub(factor.mul(base)).value();
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// A basis of the right null space, one vector per free column, in
    /// ascending free-column order. Deterministic: the standard basis
    /// obtained from the reduced echelon form.
    pub fn null_space(&self) -> Vec<Vec<FieldElement>> {
        let mut work = self.clone();
        let pivots = work.rref();
        let q = self.modulus;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![FieldElement::zero(q); self.cols];
            v[free] = FieldElement::one(q);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = work.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = FieldElement::zero(self.modulus);
                for c in 0..self.cols {
                    acc = acc.add(self.get(r, c).mul(v[c]));
                }
                acc
            })
            .collect()
    }
}
