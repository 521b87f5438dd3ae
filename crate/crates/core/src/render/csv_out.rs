//! CSV tables for every analysis result.

use crate::creativity::CreativityReport;
use crate::discriminant::{DiscriminantSlice, E1Report, SliceKind};
use crate::envelope::EnvelopeBranch;
use crate::frontal::FrontalData;
use crate::seismic::ReflectorPoint;

use super::format::fmt_num;

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("UTF-8 fields")
}

/// `t,x,y,branch`, ordered by `t` and then by branch.
pub fn envelope_csv(branches: &[EnvelopeBranch]) -> String {
    let n = branches.iter().map(|b| b.t.len()).max().unwrap_or(0);
    let rows = (0..n).flat_map(|k| {
        branches
            .iter()
            .filter(move |b| k < b.t.len())
            .map(move |b| {
                vec![
                    fmt_num(b.t[k]),
                    fmt_num(b.points[k].x),
                    fmt_num(b.points[k].y),
                    b.label.name(),
                ]
            })
    });
    table(&["t", "x", "y", "branch"], rows)
}

/// `t,status,cos_theta,margin`; `cos_theta` is blank unless solvable.
pub fn creativity_csv(report: &CreativityReport) -> String {
    let rows = (0..report.len()).map(|k| {
        let s = report.status[k];
        vec![
            fmt_num(report.t[k]),
            s.label().to_string(),
            s.cos_theta().map(fmt_num).unwrap_or_default(),
            fmt_num(report.margin[k]),
        ]
    });
    table(&["t", "status", "cos_theta", "margin"], rows)
}

/// `t,kind,x1,y1,x2,y2`; full circles carry the center in `x1,y1` and the
/// radius in `x2`.
pub fn discriminant_csv(slices: &[DiscriminantSlice]) -> String {
    let rows = slices.iter().map(|s| {
        let mut row = vec![fmt_num(s.t), s.kind.name().to_string()];
        let blank = String::new;
        match s.kind {
            SliceKind::Empty => row.extend([blank(), blank(), blank(), blank()]),
            SliceKind::Tangent(p) => row.extend([fmt_num(p.x), fmt_num(p.y), blank(), blank()]),
            SliceKind::Pair(p, q) => {
                row.extend([fmt_num(p.x), fmt_num(p.y), fmt_num(q.x), fmt_num(q.y)])
            }
            SliceKind::FullCircle { center, radius } => row.extend([
                fmt_num(center.x),
                fmt_num(center.y),
                fmt_num(radius),
                blank(),
            ]),
        }
        row
    });
    table(&["t", "kind", "x1", "y1", "x2", "y2"], rows)
}

/// `t,nu_x,nu_y,ell,beta,singular`
pub fn frontal_csv(frames: &FrontalData) -> String {
    let rows = (0..frames.len()).map(|k| {
        vec![
            fmt_num(frames.t[k]),
            fmt_num(frames.normal[k].x),
            fmt_num(frames.normal[k].y),
            fmt_num(frames.ell[k]),
            fmt_num(frames.beta[k]),
            frames.singular[k].to_string(),
        ]
    });
    table(&["t", "nu_x", "nu_y", "ell", "beta", "singular"], rows)
}

/// `eps,branch,x,y,distance` for the tracked nearby-circle intersections.
pub fn e1_csv(report: &E1Report) -> String {
    let rows = report.branches.iter().enumerate().flat_map(|(j, b)| {
        b.points.iter().enumerate().map(move |(i, (eps, p))| {
            let d = b.distances.get(i).map(|d| fmt_num(*d)).unwrap_or_default();
            vec![fmt_num(*eps), j.to_string(), fmt_num(p.x), fmt_num(p.y), d]
        })
    });
    table(&["eps", "branch", "x", "y", "distance"], rows)
}

/// `t,wx,wy`
pub fn orthotomic_csv(w: &EnvelopeBranch) -> String {
    let rows =
        w.t.iter()
            .zip(&w.points)
            .map(|(t, p)| vec![fmt_num(*t), fmt_num(p.x), fmt_num(p.y)]);
    table(&["t", "wx", "wy"], rows)
}

/// `t,mx,my,flagged`
pub fn reflector_csv(points: &[ReflectorPoint]) -> String {
    let rows = points.iter().map(|m| {
        vec![
            fmt_num(m.t),
            fmt_num(m.point.x),
            fmt_num(m.point.y),
            m.flagged.to_string(),
        ]
    });
    table(&["t", "mx", "my", "flagged"], rows)
}
