use pegarmy::{build_ilp, enumerate_jump_moves, Board, Configuration, IlpInstance, Position};
use rand::seq::SliceRandom;
use rand::Rng;

/// A connected blob of 8 to 15 cells grown from the origin, a desert of at
/// most four cells made of the target and, first, its neighbours, and per-move caps of 1 or 2.
pub fn random_instance(rng: &mut impl Rng) -> IlpInstance {
    let n = rng.gen_range(8..=15);
    let mut cells = vec![Position::new(0, 0)];
    while cells.len() < n {
        let from = cells[rng.gen_range(0..cells.len())];
        let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
        let p = from.offset(dx, dy);
        if !cells.contains(&p) {
            cells.push(p);
        }
    }
    let target = cells[rng.gen_range(0..n)];
    let size = rng.gen_range(1..=4);
    let mut desert = vec![target];
    let mut around: Vec<Position> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|&(dx, dy)| target.offset(dx, dy))
        .filter(|p| cells.contains(p))
        .collect();
    around.shuffle(rng);
    desert.extend(around.into_iter().take(size - 1));
    for _ in 0..32 {
        if desert.len() == size {
            break;
        }
        let from = desert[rng.gen_range(0..desert.len())];
        let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
        let p = from.offset(dx, dy);
        if cells.contains(&p) && !desert.contains(&p) {
            desert.push(p);
        }
    }
    let board = Board::new(cells, desert, target).unwrap();
    let moves = enumerate_jump_moves(&board);
    let caps = (0..moves.len()).map(|_| rng.gen_range(1..=2)).collect();
    build_ilp(&board, &moves, &Configuration::single_peg_at_target(&board))
        .unwrap()
        .with_caps(caps)
}
