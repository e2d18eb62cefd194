//! Polysquare translation surfaces and polycube translation 3-manifolds.
//!
//! A manifold is a set of unit cubes on the integer lattice together with, for
//! every axis, a bijection `next[axis]` sending a cube to the cube whose low
//! face is glued to its high face. Gluings are perpendicular translations, so
//! `next[axis][c]` always lies on the axis line through `c`.

pub mod gallery;

use crate::arithmetic::DirectionSpec;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    /// The two other axes, in the order used for edge slots.
    pub fn others(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn third(a: Axis, b: Axis) -> Axis {
        Axis::from_index(3 - a.index() - b.index())
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Low,
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceRef {
    pub cube: usize,
    pub axis: Axis,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeCell {
    pub origin: [i64; 3],
}

/// Partner of a boundary face and the translation carrying it there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Glue {
    pub partner: FaceRef,
    pub translation: [i64; 3],
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("{side:?} {axis} face of the cell at {origin:?} has no partner")]
    UnpairedFace { origin: Vec<i64>, axis: Axis, side: Side },
    #[error("low {axis} face of the cell at {origin:?} is claimed by two gluings")]
    DuplicatePartner { origin: Vec<i64>, axis: Axis },
    #[error("gluing {from:?} -> {to:?} along {axis} is not a perpendicular translation")]
    BadTranslation { from: Vec<i64>, to: Vec<i64>, axis: Axis },
    #[error("cells do not form a connected manifold")]
    Disconnected,
    #[error("duplicate cell at {0:?}")]
    DuplicateCube(Vec<i64>),
    #[error("no cell at {0:?}")]
    UnknownCube(Vec<i64>),
    #[error("no cells given")]
    Empty,
    #[error("axis {0} does not exist in two dimensions")]
    BadAxis(Axis),
    #[error("wall after copy {after_copy} of base cube {base_cube} is outside the cover")]
    WallOutsideRange { base_cube: usize, after_copy: usize },
    #[error("base is not of product type with circle direction {0}")]
    NotProductType(Axis),
    #[error("label list is not a permutation of 1..={0}")]
    BadLabels(usize),
    #[error("magnification factor must be positive")]
    BadFactor,
}

impl LatticeError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::UnpairedFace { .. } => "UnpairedFace",
            Self::DuplicatePartner { .. } => "DuplicatePartner",
            Self::BadTranslation { .. } => "BadTranslation",
            Self::Disconnected => "Disconnected",
            Self::DuplicateCube(_) => "DuplicateCube",
            Self::UnknownCube(_) => "UnknownCube",
            Self::Empty => "Empty",
            Self::BadAxis(_) => "BadAxis",
            Self::WallOutsideRange { .. } => "WallOutsideRange",
            Self::NotProductType(_) => "NotProductType",
            Self::BadLabels(_) => "BadLabels",
            Self::BadFactor => "BadFactor",
        }
    }
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// High face of `cube` on `axis` separates it from its lattice neighbour.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSpec {
    pub cube: Vec<i64>,
    pub axis: Axis,
}

/// Glue the high `axis` face of `from` to the low face of `to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingOverride {
    pub from: Vec<i64>,
    pub axis: Axis,
    pub to: Vec<i64>,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// JSON manifest for a 3-manifold.
///
/// With `street_wrap` (the default) every maximal street wraps end to end;
/// walls cut streets and overrides replace individual gluings. Without it,
/// every face not glued to its lattice neighbour needs an override.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub cubes: Vec<[i64; 3]>,
    #[serde(default)]
    pub walls: Vec<WallSpec>,
    #[serde(default)]
    pub gluing_overrides: Vec<GluingOverride>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub street_wrap: bool,
    /// published labels in manifest order; canonical (y, x, z) labels otherwise
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionSpec>,
}

impl Manifest {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    Canonical,
    Manifest,
}

/// Street tables over `D`-dimensional cells.
fn build_next<const D: usize>(
    origins: &[[i64; D]],
    index: &HashMap<[i64; D], usize>,
    walls: &HashSet<(usize, usize)>,
    overrides: &[(usize, usize, usize)],
    street_wrap: bool,
) -> Result<Vec<Vec<usize>>> {
    let n = origins.len();
    let shift = |o: [i64; D], a: usize, d: i64| {
        let mut p = o;
        p[a] += d;
        p
    };
    let axis_of = |a: usize| Axis::from_index(a);
    let mut next = vec![vec![usize::MAX; n]; D];
    for a in 0..D {
        for c in 0..n {
            let o = origins[c];
            let neighbour = index.get(&shift(o, a, 1)).copied();
            match neighbour {
                Some(nb) if !walls.contains(&(c, a)) => next[a][c] = nb,
                _ if street_wrap => {
                    // walk back to the first cell of this street
                    let mut first = c;
                    while let Some(&p) = index.get(&shift(origins[first], a, -1)) {
                        if walls.contains(&(p, a)) {
                            break;
                        }
                        first = p;
                    }
                    next[a][c] = first;
                }
                _ => {}
            }
        }
    }
    for &(from, a, to) in overrides {
        let (fo, to_o) = (origins[from], origins[to]);
        if (0..D).any(|b| b != a && fo[b] != to_o[b]) {
            return Err(LatticeError::BadTranslation { from: fo.to_vec(), to: to_o.to_vec(), axis: axis_of(a) });
        }
        next[a][from] = to;
    }
    for a in 0..D {
        let mut incoming = vec![0u32; n];
        for c in 0..n {
            if next[a][c] == usize::MAX {
                return Err(LatticeError::UnpairedFace {
                    origin: origins[c].to_vec(),
                    axis: axis_of(a),
                    side: Side::High,
                });
            }
            incoming[next[a][c]] += 1;
        }
        for c in 0..n {
            match incoming[c] {
                0 => {
                    return Err(LatticeError::UnpairedFace {
                        origin: origins[c].to_vec(),
                        axis: axis_of(a),
                        side: Side::Low,
                    })
                }
                1 => {}
                _ => return Err(LatticeError::DuplicatePartner { origin: origins[c].to_vec(), axis: axis_of(a) }),
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(n);
    for row in &next {
        for (c, &nb) in row.iter().enumerate() {
            uf.union(c, nb);
        }
    }
    if (1..n).any(|c| !uf.equiv(0, c)) {
        return Err(LatticeError::Disconnected);
    }
    Ok(next)
}

fn index_cells<const D: usize>(origins: &[[i64; D]]) -> Result<HashMap<[i64; D], usize>> {
    if origins.is_empty() {
        return Err(LatticeError::Empty);
    }
    let mut index = HashMap::with_capacity(origins.len());
    for (i, &o) in origins.iter().enumerate() {
        if index.insert(o, i).is_some() {
            return Err(LatticeError::DuplicateCube(o.to_vec()));
        }
    }
    Ok(index)
}

fn lookup<const D: usize>(index: &HashMap<[i64; D], usize>, v: &[i64]) -> Result<usize> {
    let key: [i64; D] = v.try_into().map_err(|_| LatticeError::UnknownCube(v.to_vec()))?;
    index.get(&key).copied().ok_or_else(|| LatticeError::UnknownCube(v.to_vec()))
}

fn inverse(next: &[Vec<usize>]) -> Vec<Vec<usize>> {
    next.iter()
        .map(|row| {
            let mut inv = vec![0; row.len()];
            for (c, &n) in row.iter().enumerate() {
                inv[n] = c;
            }
            inv
        })
        .collect()
}

fn check_labels(labels: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for &l in labels {
        if l == 0 || l > n || seen[l] {
            return Err(LatticeError::BadLabels(n));
        }
        seen[l] = true;
    }
    if labels.len() != n {
        return Err(LatticeError::BadLabels(n));
    }
    Ok(())
}

/// An axis-parallel unit edge class after identification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub id: usize,
    pub axis: Axis,
    /// number of quadrant cells glued around the edge; 4 means regular
    pub quadrants: usize,
    /// `(cube, slot)` incidences; slot bit 0 is the high/low side along the
    /// first of `axis.others()`, bit 1 along the second
    pub members: Vec<(usize, u8)>,
}

impl EdgeClass {
    pub fn is_singular(&self) -> bool {
        self.quadrants != 4
    }

    /// Cone angle in units of π/2.
    pub fn cone_angle_quarters(&self) -> usize {
        self.quadrants
    }
}

#[derive(Clone, Debug)]
pub struct Polycube3Manifold {
    pub name: String,
    cubes: Vec<CubeCell>,
    index: HashMap<[i64; 3], usize>,
    next: [Vec<usize>; 3],
    prev: [Vec<usize>; 3],
    /// class id per `cube * 12 + axis * 4 + slot`
    edge_of: Vec<u32>,
    classes: Vec<EdgeClass>,
    singular_slot: Vec<bool>,
    labels: Vec<usize>,
    label_source: LabelSource,
    block_index: Option<Vec<usize>>,
    direction: Option<DirectionSpec>,
}

impl PartialEq for Polycube3Manifold {
    fn eq(&self, other: &Self) -> bool {
        self.cubes == other.cubes && self.next == other.next && self.labels == other.labels
    }
}

impl Polycube3Manifold {
    /// Validate gluing tables and derive the edge classes.
    pub fn from_tables(name: impl Into<String>, origins: Vec<[i64; 3]>, next: [Vec<usize>; 3]) -> Result<Self> {
        let index = index_cells(&origins)?;
        let n = origins.len();
        let mut tables = Vec::with_capacity(3);
        for (a, row) in next.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::UnpairedFace {
                    origin: origins[0].to_vec(),
                    axis: Axis::from_index(a),
                    side: Side::High,
                });
            }
            tables.push(row.clone());
        }
        let overrides: Vec<(usize, usize, usize)> =
            (0..3).flat_map(|a| (0..n).map(move |c| (a, c))).map(|(a, c)| (c, a, next[a][c])).collect();
        let checked = build_next(&origins, &index, &HashSet::new(), &overrides, false)?;
        let next: [Vec<usize>; 3] = checked.try_into().expect("three axes");
        Ok(Self::assemble(name.into(), origins, index, next))
    }

    fn assemble(name: String, origins: Vec<[i64; 3]>, index: HashMap<[i64; 3], usize>, next: [Vec<usize>; 3]) -> Self {
        let prev: [Vec<usize>; 3] = inverse(&next).try_into().expect("three axes");
        let n = origins.len();
        let mut uf = UnionFind::<usize>::new(n * 12);
        let slot_id = |c: usize, a: Axis, s: usize| c * 12 + a.index() * 4 + s;
        for c in 0..n {
            for a in Axis::ALL {
                let (b, d) = a.others();
                for sd in 0..2 {
                    // crossing the high face along b keeps the d-side fixed
                    uf.union(slot_id(c, a, 1 + 2 * sd), slot_id(next[b.index()][c], a, 2 * sd));
                }
                for sb in 0..2 {
                    uf.union(slot_id(c, a, sb + 2), slot_id(next[d.index()][c], a, sb));
                }
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<EdgeClass> = Vec::new();
        let mut edge_of = vec![0u32; n * 12];
        for c in 0..n {
            for a in Axis::ALL {
                for s in 0..4 {
                    let id = slot_id(c, a, s);
                    let root = uf.find(id);
                    let k = *class_of_root.entry(root).or_insert_with(|| {
                        classes.push(EdgeClass { id: classes.len(), axis: a, quadrants: 0, members: vec![] });
                        classes.len() - 1
                    });
                    classes[k].quadrants += 1;
                    classes[k].members.push((c, s as u8));
                    edge_of[id] = k as u32;
                }
            }
        }
        let singular_slot = edge_of.iter().map(|&k| classes[k as usize].is_singular()).collect();
        let labels = canonical_labels(&origins);
        Polycube3Manifold {
            name,
            cubes: origins.into_iter().map(|origin| CubeCell { origin }).collect(),
            index,
            next,
            prev,
            edge_of,
            classes,
            singular_slot,
            labels,
            label_source: LabelSource::Canonical,
            block_index: None,
            direction: None,
        }
    }

    pub fn cube_count(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> &[CubeCell] {
        &self.cubes
    }

    pub fn origin(&self, c: usize) -> [i64; 3] {
        self.cubes[c].origin
    }

    pub fn cube_at(&self, origin: [i64; 3]) -> Option<usize> {
        self.index.get(&origin).copied()
    }

    #[inline]
    pub fn next(&self, axis: Axis, c: usize) -> usize {
        self.next[axis.index()][c]
    }

    #[inline]
    pub fn prev(&self, axis: Axis, c: usize) -> usize {
        self.prev[axis.index()][c]
    }

    pub fn next_table(&self, axis: Axis) -> &[usize] {
        &self.next[axis.index()]
    }

    /// Translation taking the high `axis` face of `c` onto its partner.
    pub fn high_translation(&self, axis: Axis, c: usize) -> [i64; 3] {
        let (o, p) = (self.origin(c), self.origin(self.next(axis, c)));
        let mut t = [p[0] - o[0], p[1] - o[1], p[2] - o[2]];
        t[axis.index()] -= 1;
        t
    }

    pub fn partner(&self, face: FaceRef) -> Glue {
        match face.side {
            Side::High => Glue {
                partner: FaceRef { cube: self.next(face.axis, face.cube), axis: face.axis, side: Side::Low },
                translation: self.high_translation(face.axis, face.cube),
            },
            Side::Low => {
                let p = self.prev(face.axis, face.cube);
                let t = self.high_translation(face.axis, p);
                Glue {
                    partner: FaceRef { cube: p, axis: face.axis, side: Side::High },
                    translation: [-t[0], -t[1], -t[2]],
                }
            }
        }
    }

    /// Boundary faces (glued by a nonzero translation) with their partners.
    pub fn gluing(&self) -> Vec<(FaceRef, Glue)> {
        let mut out = Vec::new();
        for c in 0..self.cube_count() {
            for axis in Axis::ALL {
                for side in [Side::Low, Side::High] {
                    let f = FaceRef { cube: c, axis, side };
                    let g = self.partner(f);
                    if g.translation != [0, 0, 0] {
                        out.push((f, g));
                    }
                }
            }
        }
        out
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn edge_class_of(&self, c: usize, axis: Axis, slot: u8) -> usize {
        self.edge_of[c * 12 + axis.index() * 4 + slot as usize] as usize
    }

    #[inline]
    pub fn is_singular_slot(&self, c: usize, axis: Axis, slot: u8) -> bool {
        self.singular_slot[c * 12 + axis.index() * 4 + slot as usize]
    }

    /// Axis along which every street has length one, if any.
    pub fn circle_axis(&self) -> Option<Axis> {
        Axis::ALL
            .into_iter()
            .find(|&a| (0..self.cube_count()).all(|c| self.next(a, c) == c))
    }

    /// Cube labels, 1-based.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_source(&self) -> LabelSource {
        self.label_source
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels, self.cube_count())?;
        self.labels = labels;
        self.label_source = LabelSource::Manifest;
        Ok(self)
    }

    pub fn cube_with_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn block_index(&self) -> Option<&[usize]> {
        self.block_index.as_deref()
    }

    pub fn direction(&self) -> Option<&DirectionSpec> {
        self.direction.as_ref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Explicit manifest: walls wherever a lattice neighbour is not glued,
    /// overrides for every face glued across a gap.
    pub fn to_manifest(&self) -> Manifest {
        let mut walls = Vec::new();
        let mut gluing_overrides = Vec::new();
        for c in 0..self.cube_count() {
            let o = self.origin(c);
            for axis in Axis::ALL {
                let mut nb = o;
                nb[axis.index()] += 1;
                let target = self.next(axis, c);
                match self.cube_at(nb) {
                    Some(n) if n == target => continue,
                    Some(_) => walls.push(WallSpec { cube: o.to_vec(), axis }),
                    None => {}
                }
                gluing_overrides.push(GluingOverride { from: o.to_vec(), axis, to: self.origin(target).to_vec() });
            }
        }
        Manifest {
            name: self.name.clone(),
            cubes: self.cubes.iter().map(|c| c.origin).collect(),
            walls,
            gluing_overrides,
            street_wrap: false,
            labels: match self.label_source {
                LabelSource::Manifest => Some(self.labels.clone()),
                LabelSource::Canonical => None,
            },
            direction: self.direction.clone(),
        }
    }
}

/// Label cubes 1..=n in lexicographic `(y, x, z)` order.
pub fn canonical_labels<const D: usize>(origins: &[[i64; D]]) -> Vec<usize> {
    let key = |o: &[i64; D]| -> Vec<i64> {
        if D == 3 {
            vec![o[1], o[0], o[2]]
        } else {
            vec![o[1], o[0]]
        }
    };
    let mut order: Vec<usize> = (0..origins.len()).collect();
    order.sort_by_key(|&i| key(&origins[i]));
    let mut labels = vec![0; origins.len()];
    for (rank, &i) in order.iter().enumerate() {
        labels[i] = rank + 1;
    }
    labels
}

pub fn build_manifold(manifest: &Manifest) -> Result<Polycube3Manifold> {
    let origins = manifest.cubes.clone();
    let index = index_cells(&origins)?;
    let mut walls = HashSet::new();
    for w in &manifest.walls {
        walls.insert((lookup(&index, &w.cube)?, w.axis.index()));
    }
    let mut overrides = Vec::new();
    for o in &manifest.gluing_overrides {
        overrides.push((lookup(&index, &o.from)?, o.axis.index(), lookup(&index, &o.to)?));
    }
    let next = build_next(&origins, &index, &walls, &overrides, manifest.street_wrap)?;
    let next: [Vec<usize>; 3] = next.try_into().expect("three axes");
    let mut m = Polycube3Manifold::assemble(manifest.name.clone(), origins, index, next);
    if let Some(labels) = &manifest.labels {
        m = m.with_labels(labels.clone())?;
    }
    m.direction = manifest.direction.clone();
    Ok(m)
}

/// 2D analogue of [`WallSpec`]; axis is `x` or `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceManifest {
    pub name: String,
    pub squares: Vec<[i64; 2]>,
    #[serde(default)]
    pub walls: Vec<WallSpec>,
    #[serde(default)]
    pub gluing_overrides: Vec<GluingOverride>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub street_wrap: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct PolysquareSurface {
    pub name: String,
    squares: Vec<[i64; 2]>,
    next: [Vec<usize>; 2],
    labels: Vec<usize>,
    label_source: LabelSource,
}

impl PartialEq for PolysquareSurface {
    fn eq(&self, other: &Self) -> bool {
        self.squares == other.squares && self.next == other.next && self.labels == other.labels
    }
}

impl PolysquareSurface {
    pub fn build(manifest: &SurfaceManifest) -> Result<Self> {
        let index = index_cells(&manifest.squares)?;
        let axis2 = |a: Axis| match a {
            Axis::Z => Err(LatticeError::BadAxis(a)),
            _ => Ok(a.index()),
        };
        let mut walls = HashSet::new();
        for w in &manifest.walls {
            walls.insert((lookup(&index, &w.cube)?, axis2(w.axis)?));
        }
        let mut overrides = Vec::new();
        for o in &manifest.gluing_overrides {
            overrides.push((lookup(&index, &o.from)?, axis2(o.axis)?, lookup(&index, &o.to)?));
        }
        let next = build_next(&manifest.squares, &index, &walls, &overrides, manifest.street_wrap)?;
        let next: [Vec<usize>; 2] = next.try_into().expect("two axes");
        let (labels, label_source) = match &manifest.labels {
            Some(l) => {
                check_labels(l, manifest.squares.len())?;
                (l.clone(), LabelSource::Manifest)
            }
            None => (canonical_labels(&manifest.squares), LabelSource::Canonical),
        };
        Ok(PolysquareSurface { name: manifest.name.clone(), squares: manifest.squares.clone(), next, labels, label_source })
    }

    /// Surface whose streets all wrap end to end.
    pub fn from_squares(name: &str, squares: &[[i64; 2]]) -> Result<Self> {
        Self::build(&SurfaceManifest {
            name: name.into(),
            squares: squares.to_vec(),
            walls: vec![],
            gluing_overrides: vec![],
            street_wrap: true,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        check_labels(&labels, self.squares.len())?;
        self.labels = labels;
        self.label_source = LabelSource::Manifest;
        Ok(self)
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn squares(&self) -> &[[i64; 2]] {
        &self.squares
    }

    /// Neighbour across the high edge; `axis` is X (right) or Y (up).
    pub fn next(&self, axis: Axis, s: usize) -> usize {
        self.next[axis.index()][s]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_source(&self) -> LabelSource {
        self.label_source
    }

    /// Number of maximal streets along `axis`.
    pub fn street_count(&self, axis: Axis) -> usize {
        let t = &self.next[axis.index()];
        let mut seen = vec![false; t.len()];
        let mut count = 0;
        for s in 0..t.len() {
            if !seen[s] {
                count += 1;
                let mut c = s;
                while !seen[c] {
                    seen[c] = true;
                    c = t[c];
                }
            }
        }
        count
    }
}

/// Corner classes of the surface under edge identification.
pub fn count_vertex_classes(surface: &PolysquareSurface) -> usize {
    let n = surface.square_count();
    let corner = |s: usize, cx: usize, cy: usize| s * 4 + cx + 2 * cy;
    let mut uf = UnionFind::<usize>::new(n * 4);
    for s in 0..n {
        let r = surface.next(Axis::X, s);
        let u = surface.next(Axis::Y, s);
        for k in 0..2 {
            uf.union(corner(s, 1, k), corner(r, 0, k));
            uf.union(corner(s, k, 1), corner(u, k, 0));
        }
    }
    let mut roots: Vec<usize> = (0..n * 4).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Singular edge classes: those with a quadrant count other than 4.
pub fn singular_edges(m: &Polycube3Manifold) -> Vec<EdgeClass> {
    m.edge_classes().iter().filter(|c| c.is_singular()).cloned().collect()
}

/// Surface coordinates `(u, v)` go to the two axes after `circle_axis` in
/// cyclic order: Z-circle uses `(x, y)`, X-circle `(y, z)`, Y-circle `(z, x)`.
pub fn product_with_circle(surface: &PolysquareSurface, circle_axis: Axis) -> Result<Polycube3Manifold> {
    let (ua, va) = match circle_axis {
        Axis::Z => (Axis::X, Axis::Y),
        Axis::X => (Axis::Y, Axis::Z),
        Axis::Y => (Axis::Z, Axis::X),
    };
    let n = surface.square_count();
    let origins: Vec<[i64; 3]> = surface
        .squares()
        .iter()
        .map(|&[u, v]| {
            let mut o = [0i64; 3];
            o[ua.index()] = u;
            o[va.index()] = v;
            o
        })
        .collect();
    let mut next: [Vec<usize>; 3] = [vec![0; n], vec![0; n], vec![0; n]];
    next[ua.index()] = surface.next[0].clone();
    next[va.index()] = surface.next[1].clone();
    next[circle_axis.index()] = (0..n).collect();
    let m = Polycube3Manifold::from_tables(format!("{} x circle({circle_axis})", surface.name), origins, next)?;
    match surface.label_source {
        LabelSource::Manifest => m.with_labels(surface.labels.clone()),
        LabelSource::Canonical => Ok(m),
    }
}

/// Solid boundary between copy `after_copy` and copy `after_copy + 1` of
/// one base cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverWall {
    pub base_cube: usize,
    pub after_copy: usize,
}

/// `s` copies of an x-circle product placed side by side along x.
///
/// Copy `i` of base cube `b` is cube `i * d + b`. Along each x-line the
/// copies `0..s` are cut at the walls and every resulting street wraps.
pub fn split_cover(base: &Polycube3Manifold, s: usize, walls: &[CoverWall]) -> Result<Polycube3Manifold> {
    let d = base.cube_count();
    if s == 0 {
        return Err(LatticeError::BadFactor);
    }
    if (0..d).any(|c| base.next(Axis::X, c) != c) {
        return Err(LatticeError::NotProductType(Axis::X));
    }
    let mut cut = vec![vec![false; s]; d];
    for w in walls {
        if w.base_cube >= d || w.after_copy + 1 >= s {
            return Err(LatticeError::WallOutsideRange { base_cube: w.base_cube, after_copy: w.after_copy });
        }
        cut[w.base_cube][w.after_copy] = true;
    }
    let xs = base.cubes().iter().map(|c| c.origin[0]);
    let width = xs.clone().max().unwrap() - xs.min().unwrap() + 1;
    let mut origins = Vec::with_capacity(s * d);
    for i in 0..s {
        for b in 0..d {
            let mut o = base.origin(b);
            o[0] += i as i64 * width;
            origins.push(o);
        }
    }
    let mut next: [Vec<usize>; 3] = [vec![0; s * d], vec![0; s * d], vec![0; s * d]];
    for i in 0..s {
        for b in 0..d {
            for a in [Axis::Y, Axis::Z] {
                next[a.index()][i * d + b] = i * d + base.next(a, b);
            }
        }
    }
    for b in 0..d {
        let mut start = 0;
        for i in 0..s {
            if i + 1 == s || cut[b][i] {
                for j in start..i {
                    next[0][j * d + b] = (j + 1) * d + b;
                }
                next[0][i * d + b] = start * d + b;
                start = i + 1;
            }
        }
    }
    let mut m = Polycube3Manifold::from_tables(format!("{}-fold cover of {}", s, base.name), origins, next)?;
    m.block_index = Some((0..s * d).map(|c| c / d).collect());
    Ok(m)
}

/// Scale every cube into an `n × n × n` block of unit cubes.
pub fn magnify(m: &Polycube3Manifold, n: usize) -> Result<Polycube3Manifold> {
    if n == 0 {
        return Err(LatticeError::BadFactor);
    }
    let d = m.cube_count();
    let per = n * n * n;
    let sub = |c: usize, off: [usize; 3]| c * per + (off[0] * n + off[1]) * n + off[2];
    let mut origins = Vec::with_capacity(d * per);
    let mut next: [Vec<usize>; 3] = [vec![0; d * per], vec![0; d * per], vec![0; d * per]];
    for c in 0..d {
        let o = m.origin(c);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let off = [i, j, k];
                    origins.push([
                        o[0] * n as i64 + i as i64,
                        o[1] * n as i64 + j as i64,
                        o[2] * n as i64 + k as i64,
                    ]);
                    for a in Axis::ALL {
                        let ai = a.index();
                        let mut t = off;
                        let target = if off[ai] + 1 < n {
                            t[ai] += 1;
                            sub(c, t)
                        } else {
                            t[ai] = 0;
                            sub(m.next(a, c), t)
                        };
                        next[ai][sub(c, off)] = target;
                    }
                }
            }
        }
    }
    let mut out = Polycube3Manifold::from_tables(format!("{} magnified {}x", m.name, n), origins, next)?;
    out.block_index = Some((0..d * per).map(|c| c / per).collect());
    Ok(out)
}

/// Witness of an `s × 2 × 1` array whose street row is an x-street of length
/// `s` and whose walled row has walls on all interior x-faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayWitness {
    pub walled: Vec<usize>,
    pub street: Vec<usize>,
    /// street row lies below the walled row, reached through a y-wrap
    pub rows_swapped: bool,
}

/// Search for the walled-row/street-row array; `next_y` of the walled row must
/// be the street row, either directly above or (swapped) below through a wrap.
pub fn find_walled_street_array(m: &Polycube3Manifold, s: usize) -> Option<ArrayWitness> {
    if s == 0 {
        return None;
    }
    'outer: for w0 in 0..m.cube_count() {
        let o = m.origin(w0);
        let mut walled = Vec::with_capacity(s);
        for i in 0..s {
            match m.cube_at([o[0] + i as i64, o[1], o[2]]) {
                Some(c) => walled.push(c),
                None => continue 'outer,
            }
        }
        let street: Vec<usize> = walled.iter().map(|&c| m.next(Axis::Y, c)).collect();
        let dy = m.origin(street[0])[1] - o[1];
        if dy != 1 && dy != -1 {
            continue;
        }
        for i in 0..s {
            if m.origin(street[i]) != [o[0] + i as i64, o[1] + dy, o[2]] {
                continue 'outer;
            }
            if m.next(Axis::X, street[i]) != street[(i + 1) % s] {
                continue 'outer;
            }
            if i + 1 < s && m.next(Axis::X, walled[i]) == walled[i + 1] {
                continue 'outer;
            }
        }
        return Some(ArrayWitness { walled, street, rows_swapped: dy == -1 });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_solid() -> Polycube3Manifold {
        build_manifold(&Manifest {
            name: "L".into(),
            cubes: vec![[0, 0, 0], [0, 1, 0], [1, 0, 0]],
            walls: vec![],
            gluing_overrides: vec![],
            street_wrap: true,
            labels: None,
            direction: None,
        })
        .unwrap()
    }

    #[test]
    fn l_solid_gluing_matches_streets() {
        let m = l_solid();
        // bottom row (0,0),(1,0) is an x-street of length 2, the top cube wraps to itself
        assert_eq!(m.next(Axis::X, 0), 2);
        assert_eq!(m.next(Axis::X, 2), 0);
        assert_eq!(m.next(Axis::X, 1), 1);
        // the column x = 0 has length 2, the right cube wraps in y
        assert_eq!(m.next(Axis::Y, 0), 1);
        assert_eq!(m.next(Axis::Y, 1), 0);
        assert_eq!(m.next(Axis::Y, 2), 2);
        assert_eq!(m.circle_axis(), Some(Axis::Z));
    }

    #[test]
    fn unit_torus_is_flat() {
        let m = build_manifold(&Manifest {
            name: "torus".into(),
            cubes: vec![[0, 0, 0]],
            walls: vec![],
            gluing_overrides: vec![],
            street_wrap: true,
            labels: None,
            direction: None,
        })
        .unwrap();
        assert!(singular_edges(&m).is_empty());
        assert_eq!(m.edge_classes().len(), 3);
    }

    #[test]
    fn l_solid_singular_edge_at_inner_corner() {
        let m = l_solid();
        let sing = singular_edges(&m);
        assert!(sing.iter().all(|e| e.axis == Axis::Z));
        // the z-edge through (x, y) = (1, 1): top-right corner of the middle cube
        let class = m.edge_class_of(0, Axis::Z, 3);
        assert!(m.edge_classes()[class].is_singular());
        assert_eq!(m.edge_classes()[class].quadrants, 12);
    }

    #[test]
    fn unpaired_face_without_street_wrap() {
        let manifest = Manifest {
            name: "bad".into(),
            cubes: vec![[0, 0, 0]],
            walls: vec![],
            gluing_overrides: vec![
                GluingOverride { from: vec![0, 0, 0], axis: Axis::X, to: vec![0, 0, 0] },
                GluingOverride { from: vec![0, 0, 0], axis: Axis::Y, to: vec![0, 0, 0] },
            ],
            street_wrap: false,
            labels: None,
            direction: None,
        };
        let err = build_manifold(&manifest).unwrap_err();
        assert_eq!(err.name(), "UnpairedFace");
    }

    #[test]
    fn override_must_be_perpendicular() {
        let manifest = Manifest {
            name: "bad".into(),
            cubes: vec![[0, 0, 0], [1, 1, 0]],
            walls: vec![],
            gluing_overrides: vec![GluingOverride { from: vec![0, 0, 0], axis: Axis::X, to: vec![1, 1, 0] }],
            street_wrap: true,
            labels: None,
            direction: None,
        };
        assert_eq!(build_manifold(&manifest).unwrap_err().name(), "BadTranslation");
    }

    #[test]
    fn disconnected_cells_rejected() {
        let manifest = Manifest {
            name: "two".into(),
            cubes: vec![[0, 0, 0], [5, 5, 5]],
            walls: vec![],
            gluing_overrides: vec![],
            street_wrap: true,
            labels: None,
            direction: None,
        };
        assert_eq!(build_manifold(&manifest).unwrap_err(), LatticeError::Disconnected);
    }

    #[test]
    fn gluing_is_an_involution() {
        let m = l_solid();
        for (f, g) in m.gluing() {
            let back = m.partner(g.partner);
            assert_eq!(back.partner, f);
            assert_eq!(back.translation, [-g.translation[0], -g.translation[1], -g.translation[2]]);
        }
    }

    #[test]
    fn vertex_counts() {
        let torus = PolysquareSurface::from_squares("t", &[[0, 0]]).unwrap();
        assert_eq!(count_vertex_classes(&torus), 1);
        let l = PolysquareSurface::from_squares("L", &[[0, 0], [0, 1], [1, 0]]).unwrap();
        assert_eq!(count_vertex_classes(&l), 1);
        let e25 = PolysquareSurface::from_squares("e25", &[[0, 0], [1, 0], [1, 1], [2, 1], [2, 2], [3, 2]]).unwrap();
        assert_eq!(count_vertex_classes(&e25), 2);
    }

    #[test]
    fn magnify_counts_and_edges() {
        let m = l_solid();
        let big = magnify(&m, 2).unwrap();
        assert_eq!(big.cube_count(), 24);
        let small_sing = singular_edges(&m).len();
        assert_eq!(singular_edges(&big).len(), 2 * small_sing);
        assert_eq!(magnify(&m, 1).unwrap().next_table(Axis::X), m.next_table(Axis::X));
    }

    #[test]
    fn canonical_labels_sort_by_y_then_x() {
        assert_eq!(canonical_labels(&[[0i64, 0], [0, 1], [1, 0]]), vec![1, 3, 2]);
    }
}
