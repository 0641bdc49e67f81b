//! SVG rendering of a replayed game: one animated file or one file per
//! position.

use std::fmt::Write;

use pegarmy::{Board, Configuration, IllegalJump, Jump};

const CELL: i32 = 16;
const SECONDS_PER_FRAME: f64 = 0.25;

/// Every configuration of a forward game, the start included.
pub fn replay_frames(board: &Board, start: &Configuration, jumps: &[Jump]) -> Result<Vec<Configuration>, IllegalJump> {
    let mut frames = vec![start.clone()];
    for k in 0..jumps.len() {
        let next =
            pegarmy::replay_forward(board, &frames[k], &jumps[k..=k]).map_err(|e| IllegalJump { index: k, ..e })?;
        frames.push(next);
    }
    Ok(frames)
}

struct Frame {
    x0: i32,
    y1: i32,
    width: i32,
    height: i32,
}

impl Frame {
    fn of(board: &Board) -> Self {
        let xs = board.cells().iter().map(|p| p.x);
        let ys = board.cells().iter().map(|p| p.y);
        let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        Frame {
            x0,
            y1,
            width: (x1 - x0 + 3) * CELL,
            height: (y1 - y0 + 4) * CELL,
        }
    }

    /// Top-left corner of the square for `(x, y)`; `y` grows upwards.
    fn corner(&self, x: i32, y: i32) -> (i32, i32) {
        ((x - self.x0 + 1) * CELL, (self.y1 - y + 2) * CELL)
    }
}

fn star(cx: i32, cy: i32) -> String {
    let mut pts = Vec::new();
    for k in 0..10 {
        let r = if k % 2 == 0 { 7.0 } else { 3.0 };
        let a = std::f64::consts::PI * (k as f64) / 5.0 - std::f64::consts::FRAC_PI_2;
        pts.push(format!("{:.1},{:.1}", cx as f64 + r * a.cos(), cy as f64 + r * a.sin()));
    }
    pts.join(" ")
}

fn background(board: &Board, f: &Frame, out: &mut String) {
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##,
        w = f.width,
        h = f.height
    );
    let _ = writeln!(
        out,
        r##"<rect width="{}" height="{}" fill="#ffffff"/>"##,
        f.width, f.height
    );
    for (i, p) in board.cells().iter().enumerate() {
        let (x, y) = f.corner(p.x, p.y);
        let fill = if board.is_desert(i) { "#f1d9a6" } else { "#e8e8e8" };
        let _ = writeln!(
            out,
            r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#c8c8c8"/>"##
        );
    }
    let t = board.target();
    let (x, y) = f.corner(t.x, t.y);
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#d03030"/>"##,
        star(x + CELL / 2, y + CELL / 2)
    );
}

fn pegs(board: &Board, f: &Frame, state: &Configuration, out: &mut String) {
    for p in state.pegs(board) {
        let (x, y) = f.corner(p.x, p.y);
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="#202020"/>"##,
            x + CELL / 2,
            y + CELL / 2,
            CELL / 2 - 2
        );
    }
}

fn caption(k: usize, n: usize, out: &mut String) {
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-family="monospace" font-size="12">move {k}/{n}</text>"##,
        CELL,
        CELL + 4
    );
}

/// A standalone SVG of one position.
pub fn frame_svg(board: &Board, frames: &[Configuration], k: usize) -> String {
    let f = Frame::of(board);
    let mut out = String::new();
    background(board, &f, &mut out);
    caption(k, frames.len() - 1, &mut out);
    pegs(board, &f, &frames[k], &mut out);
    out.push_str("</svg>\n");
    out
}

/// One SVG that steps through every position, holding the last one.
pub fn animated_svg(board: &Board, frames: &[Configuration]) -> String {
    let f = Frame::of(board);
    let n = frames.len();
    let mut out = String::new();
    background(board, &f, &mut out);
    for (k, state) in frames.iter().enumerate() {
        let begin = k as f64 * SECONDS_PER_FRAME;
        let _ = writeln!(
            out,
            r##"<g visibility="{}">"##,
            if k == 0 { "visible" } else { "hidden" }
        );
        if k > 0 {
            let _ = writeln!(
                out,
                r##"<set attributeName="visibility" to="visible" begin="{begin:.2}s"/>"##
            );
        }
        if k + 1 < n {
            let _ = writeln!(
                out,
                r##"<set attributeName="visibility" to="hidden" begin="{:.2}s"/>"##,
                begin + SECONDS_PER_FRAME
            );
        }
        caption(k, n - 1, &mut out);
        pegs(board, &f, state, &mut out);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pegarmy::{Direction, Position};

    fn line() -> (Board, Configuration, Vec<Jump>) {
        let b = Board::new(
            (0..3).map(|x| Position::new(x, 0)),
            [Position::new(2, 0)],
            Position::new(2, 0),
        )
        .unwrap();
        let s = Configuration::from_pegs(&b, [Position::new(0, 0), Position::new(1, 0)]).unwrap();
        (b, s, vec![Jump::new(0, 0, Direction::Right)])
    }

    #[test]
    fn one_move_two_frames() {
        let (b, s, j) = line();
        let frames = replay_frames(&b, &s, &j).unwrap();
        assert_eq!(frames.len(), 2);
        let svg = frame_svg(&b, &frames, 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("#f1d9a6") && svg.contains("<polygon"));
        let anim = animated_svg(&b, &frames);
        assert_eq!(anim.matches("<g ").count(), 2);
        assert_eq!(anim, animated_svg(&b, &frames));
    }

    #[test]
    fn illegal_jump_reports_index() {
        let (b, s, mut j) = line();
        j.push(Jump::new(0, 0, Direction::Right));
        let e = replay_frames(&b, &s, &j).unwrap_err();
        assert_eq!(e.index, 1);
    }
}
