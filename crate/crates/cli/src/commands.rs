//! Subcommand implementations.

use std::time::Instant;

use holonorm::normality::{kobayashi_ratio, sample_discs};
use holonorm::sampling::{ball_points, disc_points, in_ball, rng, uniform_radii};
use holonorm::{
    alexander_family_test, alexander_function_test, ball_normal_ratio, ball_orbit,
    disc_family_probe, hartogs_test, kobayashi_normality_check, lehto_virtanen_check,
    lipschitz_ratio, marty_sup, mu, mu_local_boundedness, sharp, translate_orbit, yosida_bound,
    CNum, CPoint, DirectionSet, HoloExpr, LadderConfig, PowerSeries, VectorSamples,
};
use rand::Rng;
use serde_json::Value;

use crate::report::{self, num, object, Report};
use crate::{Cli, Command, Format, Opts};

/// A failure with its exit code: 2 for bad input, 3 for numeric failure.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<holonorm::Error> for Failure {
    fn from(e: holonorm::Error) -> Self {
        Failure {
            code: if e.is_numeric() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Out<T> = Result<T, Failure>;

pub fn run(cli: &Cli) -> Out<()> {
    let start = Instant::now();
    let opts = &cli.opts;
    validate(opts)?;
    let results = match cli.command {
        Command::Sharp => cmd_sharp(opts)?,
        Command::Mu => cmd_mu(opts)?,
        Command::Marty => cmd_marty(opts)?,
        Command::Yosida => cmd_yosida(opts)?,
        Command::BallRatio => cmd_ball_ratio(opts)?,
        Command::Kobayashi => cmd_kobayashi(opts)?,
        Command::DiscProbe => cmd_disc_probe(opts)?,
        Command::Linescan => cmd_linescan(opts)?,
        Command::Hartogs => cmd_hartogs(opts)?,
        Command::Orbit => cmd_orbit(opts)?,
    };
    let mut top = vec![
        ("tool", Value::from("holonorm")),
        ("version", Value::from(env!("CARGO_PKG_VERSION"))),
        ("config", config_echo(cli.command, opts)),
        ("results", results.json.clone()),
    ];
    if opts.timing {
        top.push(("wall_clock_seconds", num(start.elapsed().as_secs_f64())));
    }
    let full = Report {
        json: object(top),
        rows: results.rows,
    };
    let text = match opts.format {
        Format::Json => full.to_json(),
        Format::Csv => full
            .to_csv()
            .map_err(|e| input(format!("cannot write CSV: {e}")))?,
    };
    match &opts.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn validate(o: &Opts) -> Out<()> {
    let positive = [
        ("--radii", o.radii),
        ("--angles", o.angles),
        ("--phases", o.phases),
        ("--directions", o.directions),
        ("--count", o.count),
        ("--samples", o.samples),
        ("--discs", o.discs),
        ("--degree", o.degree),
        ("--orbit-size", o.orbit_size),
    ];
    for (flag, v) in positive {
        if v == 0 {
            return Err(input(format!("{flag} must be positive")));
        }
    }
    if o.radii < 2 {
        return Err(input("--radii must be at least 2"));
    }
    if o.rmin.is_nan() || o.rmin <= 0.0 {
        return Err(input("--rmin must be positive"));
    }
    if !(o.radius > 0.0 && o.radius < 1.0) {
        return Err(input("--radius must lie in (0, 1)"));
    }
    if o.arity == Some(0) {
        return Err(input("--arity must be positive"));
    }
    Ok(())
}

fn ladder(o: &Opts) -> Out<Vec<f64>> {
    o.ladder
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| input(format!("--ladder: '{}' is not a number", s.trim())))
        })
        .collect()
}

fn config_echo(cmd: Command, o: &Opts) -> Value {
    let ladder: Vec<Value> = ladder(o).unwrap_or_default().into_iter().map(num).collect();
    object(vec![
        ("command", Value::from(cmd.name())),
        ("expr", Value::from(o.expr.clone())),
        (
            "series",
            o.series
                .as_ref()
                .map_or(Value::Null, |p| Value::from(p.display().to_string())),
        ),
        ("family", o.family.clone().map_or(Value::Null, Value::from)),
        ("count", Value::from(o.count)),
        ("arity", arity(o).map_or(Value::Null, Value::from)),
        ("seed", Value::from(o.seed)),
        ("radii", Value::from(o.radii)),
        ("angles", Value::from(o.angles)),
        ("phases", Value::from(o.phases)),
        ("ladder", Value::Array(ladder)),
        ("directions", Value::from(o.directions)),
        ("rmin", num(o.rmin)),
        ("point", o.point.clone().map_or(Value::Null, Value::from)),
        ("radius", num(o.radius)),
        ("samples", Value::from(o.samples)),
        ("vectors", Value::from(o.vectors)),
        ("discs", Value::from(o.discs)),
        ("degree", Value::from(o.degree)),
        ("orbit_size", Value::from(o.orbit_size)),
        ("normal_function", Value::from(o.normal_function)),
        (
            "format",
            Value::from(if o.format == Format::Json {
                "json"
            } else {
                "csv"
            }),
        ),
    ])
}

/// Largest variable index mentioned in the expressions, unless given.
fn arity(o: &Opts) -> Option<usize> {
    if o.arity.is_some() {
        return o.arity;
    }
    let texts = o.expr.iter().chain(o.family.iter());
    let mut n = 0;
    for t in texts {
        let b = t.as_bytes();
        for i in 0..b.len() {
            if b[i] == b'z' && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
                let digits: String = t[i + 1..]
                    .chars()
                    .take_while(char::is_ascii_digit)
                    .collect();
                if let Ok(k) = digits.parse::<usize>() {
                    n = n.max(k);
                }
            }
        }
    }
    (n > 0 || !o.expr.is_empty() || o.family.is_some()).then_some(n.max(1))
}

fn family(o: &Opts) -> Out<Vec<HoloExpr>> {
    let n = arity(o).ok_or_else(|| input("no expression given: pass --expr or --family"))?;
    let mut out: Vec<HoloExpr> = o
        .expr
        .iter()
        .map(|e| HoloExpr::parse(e, n))
        .collect::<holonorm::Result<_>>()?;
    if let Some(t) = &o.family {
        if !t.contains("{j}") {
            return Err(input("--family template must contain {j}"));
        }
        for j in 1..=o.count {
            out.push(HoloExpr::parse(&t.replace("{j}", &j.to_string()), n)?);
        }
    }
    if out.is_empty() {
        return Err(input("no expression given: pass --expr or --family"));
    }
    Ok(out)
}

fn single(o: &Opts) -> Out<HoloExpr> {
    let mut f = family(o)?;
    if f.len() != 1 {
        return Err(input("this command takes exactly one --expr"));
    }
    Ok(f.remove(0))
}

fn parse_point(o: &Opts, n: usize) -> Out<CPoint> {
    let Some(text) = &o.point else {
        return Ok(CPoint::zeros(n));
    };
    let coords = text
        .split(';')
        .map(|c| {
            let parts: Vec<&str> = c.split(',').map(str::trim).collect();
            let bad = || input(format!("--point: '{c}' is not 're,im'"));
            match parts.as_slice() {
                [re] => Ok(CNum::new(re.parse().map_err(|_| bad())?, 0.0)),
                [re, im] => Ok(CNum::new(
                    re.parse().map_err(|_| bad())?,
                    im.parse().map_err(|_| bad())?,
                )),
                _ => Err(bad()),
            }
        })
        .collect::<Out<Vec<_>>>()?;
    if coords.len() != n {
        return Err(input(format!(
            "--point has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok(CPoint::new(coords))
}

fn ladder_config(o: &Opts) -> Out<LadderConfig> {
    let cfg = LadderConfig {
        ladder: ladder(o)?,
        radii: o.radii,
        angles: o.angles,
        phases: o.phases,
        directions: o.directions,
        seed: o.seed,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn vector_samples(o: &Opts, n: usize) -> VectorSamples {
    if o.vectors == 0 {
        VectorSamples::Extremal
    } else {
        VectorSamples::Sampled(
            DirectionSet::sampled(n, o.vectors, o.seed ^ 0x5eed)
                .directions()
                .to_vec(),
        )
    }
}

/// Compact polar grid of the given radius in the disc or ball.
fn compact_grid(o: &Opts, n: usize) -> Vec<CPoint> {
    let radii = uniform_radii(o.radius, o.radii);
    if n == 1 {
        disc_points(&radii, o.angles)
            .into_iter()
            .map(|z| CPoint::new(vec![z]))
            .collect()
    } else {
        ball_points(
            &radii,
            o.phases,
            &DirectionSet::sampled(n, o.directions, o.seed),
        )
    }
}

fn exprs_json(fam: &[HoloExpr]) -> Value {
    Value::Array(fam.iter().map(|f| Value::from(f.to_string())).collect())
}

fn cmd_sharp(o: &Opts) -> Out<Report> {
    let fam = family(o)?;
    let z = parse_point(o, fam[0].arity())?;
    let values = fam
        .iter()
        .map(|f| {
            Ok(object(vec![
                ("expr", Value::from(f.to_string())),
                ("sharp", num(sharp(f, &z)?)),
            ]))
        })
        .collect::<Out<Vec<_>>>()?;
    Ok(Report::new(object(vec![
        ("point", report::point(&z)),
        ("values", Value::Array(values)),
    ])))
}

fn cmd_mu(o: &Opts) -> Out<Report> {
    let fam = family(o)?;
    let z = parse_point(o, 1)?;
    let values = fam
        .iter()
        .map(|f| {
            Ok(object(vec![
                ("expr", Value::from(f.to_string())),
                ("mu", num(mu(f, z[0])?)),
            ]))
        })
        .collect::<Out<Vec<_>>>()?;
    Ok(Report::new(object(vec![
        ("point", report::point(&z)),
        ("values", Value::Array(values)),
    ])))
}

fn cmd_marty(o: &Opts) -> Out<Report> {
    let fam = family(o)?;
    let n = fam[0].arity();
    let grid = compact_grid(o, n);
    let est = marty_sup(&fam, &grid)?;
    let mut fields = vec![
        ("quantity", Value::from("f#")),
        ("family_size", Value::from(fam.len())),
        ("grid_radius", num(o.radius)),
        ("marty", report::estimate(&est)),
    ];
    let mut rep_rows = vec![("marty", est)];
    if n == 1 {
        let pts: Vec<CNum> = grid.iter().map(|z| z[0]).collect();
        let m = mu_local_boundedness(&fam, &pts)?;
        fields.push(("mu", report::estimate(&m)));
        rep_rows.push(("mu", m));
    }
    let mut rep = Report::new(object(fields));
    for (s, e) in &rep_rows {
        rep = rep.rows_from(s, e);
    }
    Ok(rep)
}

fn cmd_yosida(o: &Opts) -> Out<Report> {
    let f = single(o)?;
    let cfg = ladder_config(o)?;
    let v = if o.normal_function {
        lehto_virtanen_check(&f, &cfg)?
    } else {
        yosida_bound(&f, &cfg)?
    };
    let lip = lipschitz_ratio(&f, o.samples, o.seed)?;
    Ok(Report::new(object(vec![
        ("expr", Value::from(f.to_string())),
        ("verdict", report::verdict(&v)),
        ("lipschitz", report::estimate(&lip)),
    ]))
    .rows_from("ladder", &v.estimate))
}

fn cmd_ball_ratio(o: &Opts) -> Out<Report> {
    let f = single(o)?;
    let n = f.arity();
    let mut r = rng(o.seed);
    let zs: Vec<CPoint> = (0..o.samples).map(|_| in_ball(&mut r, n, 0.99)).collect();
    let vs = vector_samples(o, n);
    let b = ball_normal_ratio(&f, &zs, &vs)?;
    let k = kobayashi_ratio(&f, &zs, &vs)?;
    Ok(Report::new(object(vec![
        ("expr", Value::from(f.to_string())),
        ("bergman", report::estimate(&b)),
        ("kobayashi", report::estimate(&k)),
    ]))
    .rows_from("bergman", &b)
    .rows_from("kobayashi", &k))
}

fn cmd_kobayashi(o: &Opts) -> Out<Report> {
    let f = single(o)?;
    let cfg = ladder_config(o)?;
    let v = kobayashi_normality_check(&f, &cfg, &vector_samples(o, f.arity()))?;
    Ok(Report::new(object(vec![
        ("expr", Value::from(f.to_string())),
        ("verdict", report::verdict(&v)),
    ]))
    .rows_from("ladder", &v.estimate))
}

fn cmd_disc_probe(o: &Opts) -> Out<Report> {
    let f = single(o)?;
    let cfg = ladder_config(o)?;
    let discs = sample_discs(f.arity(), o.discs, o.degree, o.seed);
    let est = disc_family_probe(&f, &discs, &cfg)?;
    Ok(Report::new(object(vec![
        ("expr", Value::from(f.to_string())),
        ("quantity", Value::from("(1-|l|^2) (f o phi)#")),
        ("probe", report::estimate(&est)),
    ]))
    .rows_from("discs", &est))
}

fn cmd_linescan(o: &Opts) -> Out<Report> {
    let fam = family(o)?;
    let cfg = ladder_config(o)?;
    let dirs = DirectionSet::sampled(fam[0].arity(), o.directions, o.seed);
    if fam.len() == 1 {
        let r = alexander_function_test(&fam[0], &dirs, &cfg)?;
        Ok(Report::new(object(vec![
            ("exprs", exprs_json(&fam)),
            ("lines", report::line_scan(&r)),
        ]))
        .rows_from("lines", &r.verdict.estimate))
    } else {
        let r = alexander_family_test(&fam, &dirs, &cfg)?;
        Ok(Report::new(object(vec![
            ("exprs", exprs_json(&fam)),
            ("lines", report::line_scan(&r.lines)),
            ("ball", report::verdict(&r.ball)),
        ]))
        .rows_from("lines", &r.lines.verdict.estimate)
        .rows_from("ball", &r.ball.estimate))
    }
}

fn cmd_hartogs(o: &Opts) -> Out<Report> {
    let path = o
        .series
        .as_ref()
        .ok_or_else(|| input("hartogs needs --series PATH"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let s = PowerSeries::from_json(&text)?;
    if let Some(n) = o.arity {
        if n != s.arity() {
            return Err(holonorm::Error::ArityMismatch {
                expected: n,
                found: s.arity(),
            }
            .into());
        }
    }
    let dirs = DirectionSet::sampled(s.arity(), o.directions, o.seed);
    let r = hartogs_test(&s, &dirs, o.rmin)?;
    let mut rep =
        Report::new(report::hartogs(&r)).rows_from("partial_sum_marty", &r.partial_sum_marty);
    rep.rows.extend(
        r.lines
            .iter()
            .enumerate()
            .map(|(i, l)| ("radius".to_string(), i as f64, l.radius)),
    );
    Ok(rep)
}

fn cmd_orbit(o: &Opts) -> Out<Report> {
    let f = single(o)?;
    let n = f.arity();
    let mut r = rng(o.seed);
    let (orbit, params) = if n == 1 {
        let params: Vec<(CNum, f64)> = (0..o.orbit_size)
            .map(|_| {
                (
                    in_ball(&mut r, 1, 0.95)[0],
                    r.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let json = params
            .iter()
            .map(|(a, t)| {
                object(vec![
                    ("a", Value::Array(vec![num(a.re), num(a.im)])),
                    ("theta", num(*t)),
                ])
            })
            .collect();
        (translate_orbit(&f, &params)?, json)
    } else {
        let params: Vec<CPoint> = (0..o.orbit_size)
            .map(|_| in_ball(&mut r, n, 0.95))
            .collect();
        let json = params
            .iter()
            .map(|a| object(vec![("a", report::point(a))]))
            .collect();
        (ball_orbit(&f, &params)?, json)
    };
    let est = marty_sup(&orbit, &compact_grid(o, n))?;
    Ok(Report::new(object(vec![
        ("expr", Value::from(f.to_string())),
        ("params", Value::Array(params)),
        ("grid_radius", num(o.radius)),
        ("marty", report::estimate(&est)),
    ]))
    .rows_from("orbit", &est))
}
