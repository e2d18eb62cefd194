//! Reference surfaces and manifolds.
//!
//! Where a published cube numbering exists the surface carries it as manifest
//! labels; everything else uses canonical `(y, x)` labels. Labeling maps:
//!
//! * L-tromino: `(0,1)=1, (0,0)=2, (1,0)=3`
//! * staircases: squares sorted by `x` ascending, then `y` descending
//! * snakes: labels follow the path from the top-left square
//! * L-tetromino, six-step staircase, holed surface: canonical

use super::{
    product_with_circle, split_cover, Axis, CoverWall, Polycube3Manifold, PolysquareSurface, Result,
};

pub fn unit_square() -> PolysquareSurface {
    PolysquareSurface::from_squares("unit-torus", &[[0, 0]]).expect("valid")
}

pub fn l_tromino() -> PolysquareSurface {
    PolysquareSurface::from_squares("l-solid", &[[0, 0], [0, 1], [1, 0]])
        .and_then(|s| s.with_labels(vec![2, 1, 3]))
        .expect("valid")
}

/// Square `i` sits at `((i + 1) / 2, i / 2)`: right, up, right, up, ...
pub fn staircase_squares(s: usize) -> Vec<[i64; 2]> {
    (0..s as i64).map(|i| [(i + 1) / 2, i / 2]).collect()
}

pub fn staircase(s: usize) -> PolysquareSurface {
    let squares = staircase_squares(s);
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by_key(|&i| (squares[i][0], -squares[i][1]));
    let mut labels = vec![0; s];
    for (rank, &i) in order.iter().enumerate() {
        labels[i] = rank + 1;
    }
    PolysquareSurface::from_squares(&format!("staircase{s}"), &squares)
        .and_then(|m| m.with_labels(labels))
        .expect("valid")
}

/// Six-square staircase with canonical labels; splits into two 3-cycles.
pub fn staircase_six() -> PolysquareSurface {
    PolysquareSurface::from_squares("staircase6", &staircase_squares(6)).expect("valid")
}

/// Vertical bar of three with one square to the right of the bottom.
pub fn l_tetromino() -> PolysquareSurface {
    PolysquareSurface::from_squares("l-tetromino", &[[0, 0], [0, 1], [0, 2], [1, 0]]).expect("valid")
}

const SNAKE7: [[i64; 2]; 7] = [[0, 2], [1, 2], [1, 1], [1, 0], [2, 0], [3, 0], [3, 1]];

fn path_labelled(name: &str, path: &[[i64; 2]]) -> PolysquareSurface {
    PolysquareSurface::from_squares(name, path)
        .and_then(|s| s.with_labels((1..=path.len()).collect()))
        .expect("valid")
}

/// Down from the top-left, along the bottom, then up one.
pub fn snake7() -> PolysquareSurface {
    path_labelled("snake7", &SNAKE7)
}

/// [`snake7`] continued up and right.
pub fn snake9() -> PolysquareSurface {
    let mut path = SNAKE7.to_vec();
    path.extend([[3, 2], [4, 2]]);
    path_labelled("snake9", &path)
}

/// Eleven squares, five horizontal and six vertical streets, one hole.
pub fn holed_eleven() -> PolysquareSurface {
    PolysquareSurface::from_squares(
        "holed11",
        &[[0, 0], [1, 0], [2, 0], [3, 0], [0, 1], [2, 1], [0, 2], [1, 2], [2, 2], [3, 2], [1, 3]],
    )
    .expect("valid")
}

/// Cycles as published, in the labels documented above.
pub fn published_cycles(name: &str) -> Option<Vec<Vec<usize>>> {
    Some(match name {
        "l-solid" => vec![vec![3, 1, 2]],
        "staircase5" => vec![vec![4, 1, 5, 2, 3]],
        "staircase7" => vec![vec![4, 1, 5, 6, 2, 3, 7]],
        "snake7" => vec![vec![3, 2, 4, 6, 5, 7, 1]],
        "snake9" => vec![vec![3, 2, 4, 6, 5, 9, 7, 8, 1]],
        "l-tetromino" => vec![vec![4, 1, 2], vec![3]],
        "staircase6" => vec![vec![3, 2, 6], vec![4, 5, 1]],
        _ => return None,
    })
}

/// Published cycle type where the literal labels are not recoverable.
pub fn published_cycle_type(name: &str) -> Option<Vec<usize>> {
    match name {
        "holed11" => Some(vec![11]),
        _ => published_cycles(name).map(|cs| {
            let mut t: Vec<usize> = cs.iter().map(Vec::len).collect();
            t.sort_unstable();
            t
        }),
    }
}

/// Every surface of the criterion gallery (at least ten).
pub fn surfaces() -> Vec<PolysquareSurface> {
    let extra = |name: &str, sq: &[[i64; 2]]| PolysquareSurface::from_squares(name, sq).expect("valid");
    vec![
        unit_square(),
        l_tromino(),
        staircase(5),
        staircase(7),
        staircase_six(),
        l_tetromino(),
        snake7(),
        snake9(),
        holed_eleven(),
        staircase(3),
        staircase(4),
        extra("bar3", &[[0, 0], [1, 0], [2, 0]]),
        extra("block2x2", &[[0, 0], [1, 0], [0, 1], [1, 1]]),
        extra("l-tetromino-flat", &[[0, 0], [1, 0], [2, 0], [0, 1]]),
        extra("t-tetromino", &[[0, 0], [1, 0], [2, 0], [1, 1]]),
        extra("plus5", &[[1, 0], [0, 1], [1, 1], [2, 1], [1, 2]]),
    ]
}

fn product(s: &PolysquareSurface) -> Polycube3Manifold {
    product_with_circle(s, Axis::Z).expect("valid").with_name(s.name.clone())
}

pub fn unit_torus() -> Polycube3Manifold {
    product(&unit_square())
}

pub fn l_solid() -> Polycube3Manifold {
    product(&l_tromino())
}

fn column_base() -> Polycube3Manifold {
    let s = PolysquareSurface::from_squares("column", &[[0, 0], [1, 0]]).expect("valid");
    product_with_circle(&s, Axis::X).expect("valid")
}

fn l_base() -> Polycube3Manifold {
    product_with_circle(&PolysquareSurface::from_squares("l", &[[0, 0], [1, 0], [0, 1]]).expect("valid"), Axis::X)
        .expect("valid")
}

fn cover_with(base: &Polycube3Manifold, walled_cube: [i64; 3], copies: std::ops::Range<usize>) -> Vec<CoverWall> {
    let b = base.cube_at(walled_cube).expect("cube in base");
    copies.map(|after_copy| CoverWall { base_cube: b, after_copy }).collect()
}

/// Four copies of a two-cube column: the lower row walled, the upper row one
/// x-street of length four.
pub fn walled_column_cover() -> Result<Polycube3Manifold> {
    let base = column_base();
    let walls = cover_with(&base, [0, 0, 0], 0..3);
    Ok(split_cover(&base, 4, &walls)?.with_name("cover-column"))
}

/// As [`walled_column_cover`] with the rows exchanged; the street row is
/// reached from the walled row through the y-wrap.
pub fn walled_column_cover_swapped() -> Result<Polycube3Manifold> {
    let base = column_base();
    let walls = cover_with(&base, [0, 1, 0], 0..3);
    Ok(split_cover(&base, 4, &walls)?.with_name("cover-column-swapped"))
}

/// Four copies of the L-solid with x as circle direction, bottom cubes walled.
pub fn l_cover_bottom_walled() -> Result<Polycube3Manifold> {
    let base = l_base();
    let walls = cover_with(&base, [0, 0, 0], 0..3);
    Ok(split_cover(&base, 4, &walls)?.with_name("cover-l-bottom"))
}

/// [`l_cover_bottom_walled`] plus a wall after copy 1 of the front cube.
pub fn l_cover_front_wall() -> Result<Polycube3Manifold> {
    let base = l_base();
    let mut walls = cover_with(&base, [0, 0, 0], 0..3);
    walls.extend(cover_with(&base, [0, 0, 1], 1..2));
    Ok(split_cover(&base, 4, &walls)?.with_name("cover-l-front"))
}

/// Every manifold shipped as a manifest, keyed by file stem.
pub fn manifests() -> Vec<(&'static str, Polycube3Manifold)> {
    vec![
        ("torus", unit_torus()),
        ("l_solid", l_solid()),
        ("staircase5", product(&staircase(5))),
        ("staircase7", product(&staircase(7))),
        ("snake7", product(&snake7())),
        ("snake9", product(&snake9())),
        ("holed11", product(&holed_eleven())),
        ("l_tetromino", product(&l_tetromino())),
        ("staircase6", product(&staircase_six())),
        ("cover_l_bottom", l_cover_bottom_walled().expect("valid")),
        ("cover_l_front", l_cover_front_wall().expect("valid")),
        ("cover_column", walled_column_cover().expect("valid")),
        ("cover_column_swapped", walled_column_cover_swapped().expect("valid")),
    ]
}
