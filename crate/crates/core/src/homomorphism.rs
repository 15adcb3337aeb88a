//! Homomorphism search between finite algebras.
//!
//! Elements of the source are assigned in ascending index order. Every
//! assignment immediately forces the images of all operation results whose
//! arguments are already assigned; a forced image that conflicts with an
//! existing one prunes the branch.

use crate::algebra::FiniteAlgebra;

/// All homomorphisms `a → b`, each given as the image index of every source
/// element, in lexicographic order.
pub fn enumerate_homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut search = Search::new(a, b);
    search.run(0, &mut |h| out.push(h.to_vec()));
    out.sort();
    out
}

/// Whether `h` preserves every operation.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, h: &[usize]) -> bool {
    let n = a.size();
    (0..n).all(|x| {
        h[a.neg(x)] == b.neg(h[x])
            && (0..n).all(|y| {
                h[a.meet(x, y)] == b.meet(h[x], h[y])
                    && h[a.join(x, y)] == b.join(h[x], h[y])
                    && h[a.implies(x, y)] == b.implies(h[x], h[y])
            })
    })
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    image: Vec<Option<usize>>,
    assigned: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra) -> Self {
        Search {
            a,
            b,
            image: vec![None; a.size()],
            assigned: Vec::with_capacity(a.size()),
        }
    }

    fn run(&mut self, from: usize, emit: &mut dyn FnMut(&[usize])) {
        let Some(x) = (from..self.a.size()).find(|&x| self.image[x].is_none()) else {
            let h: Vec<usize> = self.image.iter().map(|v| v.unwrap()).collect();
            emit(&h);
            return;
        };
        for v in 0..self.b.size() {
            let mark = self.assigned.len();
            if self.assign(x, v) {
                self.run(x + 1, emit);
            }
            self.undo(mark);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().unwrap();
            self.image[x] = None;
        }
    }

    /// Assign x ↦ v and propagate; false on conflict.
    fn assign(&mut self, x: usize, v: usize) -> bool {
        let mut pending = vec![(x, v)];
        while let Some((x, v)) = pending.pop() {
            match self.image[x] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            self.image[x] = Some(v);
            self.assigned.push(x);
            let (a, b) = (self.a, self.b);
            pending.push((a.neg(x), b.neg(v)));
            for i in 0..self.assigned.len() {
                let y = self.assigned[i];
                let w = self.image[y].unwrap();
                pending.push((a.meet(x, y), b.meet(v, w)));
                pending.push((a.join(x, y), b.join(v, w)));
                pending.push((a.implies(x, y), b.implies(v, w)));
                pending.push((a.implies(y, x), b.implies(w, v)));
            }
        }
        true
    }
}
