//! End-to-end acceptance run: one PASS/FAIL line per criterion, driven
//! through the `galpt` binary and the bundled scenarios.

#[path = "../../core/tests/props/mod.rs"]
mod props;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use galpt_core::action::ProjMap;
use galpt_core::algebra::{build_field, Fe, Field, TriPoly};
use galpt_core::curve::{Divisor, PlaneCurve, ProjPoint};
use galpt_core::linsys::{projective_equivalence, Equivalence};
use galpt_core::wire;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Ctx {
    dir: tempfile::TempDir,
    /// Every certificate written, with the command line that produced it.
    certs: Vec<(Vec<String>, PathBuf)>,
}

impl Ctx {
    fn galpt(&self, args: &[&str]) -> (i32, String) {
        let out = Command::new(env!("CARGO_BIN_EXE_galpt"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .expect("binary runs");
        (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
    }

    /// Runs `cmd scenario --cert <fresh path>` and returns the exit code and
    /// the certificate.
    fn run(&mut self, cmd: &str, scenario: &str) -> Result<(i32, Value), String> {
        let path = self.dir.path().join(format!("{cmd}-{scenario}"));
        let p = path.to_str().unwrap().to_string();
        let args = vec![cmd.to_string(), scenario.to_string(), "--cert".into(), p];
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = self.galpt(&argv);
        let text = std::fs::read_to_string(&path).map_err(|e| format!("no certificate from `{cmd} {scenario}`: {e}\n{out}"))?;
        self.certs.push((args, path));
        Ok((code, serde_json::from_str(&text).map_err(|e| e.to_string())?))
    }
}

fn f9() -> Field {
    build_field(3, &[1, 0, 1]).unwrap()
}

fn pt(k: &Field, c: [Fe; 3]) -> ProjPoint {
    ProjPoint::new(k, c).unwrap()
}

fn report(cert: &Value) -> &Value {
    &cert["body"]["report"]
}

fn condition<'a>(cert: &'a Value, label: &str) -> Option<&'a Value> {
    report(cert)["conditions"].as_array()?.iter().find(|c| c["label"] == label)
}

fn verdicts(cert: &Value) -> Vec<(String, String)> {
    report(cert)["conditions"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .map(|c| (c["label"].as_str().unwrap_or("").to_string(), c["verdict"].as_str().unwrap_or("").to_string()))
                .collect()
        })
        .unwrap_or_default()
}

fn proportional(k: &Field, a: &[Fe], b: &[Fe]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| k.mul(a[i], b[j]) == k.mul(a[j], b[i])))
        && a.iter().any(|x| !x.is_zero())
}

fn fe_list(k: &Field, v: &Value) -> Result<Vec<Fe>, String> {
    v.as_array()
        .ok_or("array expected")?
        .iter()
        .map(|x| wire::fe_from_json(k, x).map_err(|e| e.to_string()))
        .collect()
}

fn model_image(k: &Field, cert: &Value) -> Result<PlaneCurve, String> {
    let phi = wire::poly_from_json(k, &cert["body"]["model"]["image"]).map_err(|e| e.to_string())?;
    PlaneCurve::new(phi).map_err(|e| e.to_string())
}

fn marks(k: &Field, cert: &Value) -> Result<Vec<ProjPoint>, String> {
    cert["body"]["marks"]
        .as_array()
        .ok_or("marks missing")?
        .iter()
        .map(|m| wire::point_from_json(k, m).map_err(|e| e.to_string()))
        .collect()
}

fn det3(k: &Field, r: [&[Fe; 3]; 3]) -> Fe {
    let m = |a, b, c, d| k.sub(k.mul(a, b), k.mul(c, d));
    k.add(
        k.sub(k.mul(r[0][0], m(r[1][1], r[2][2], r[1][2], r[2][1])), k.mul(r[0][1], m(r[1][0], r[2][2], r[1][2], r[2][0]))),
        k.mul(r[0][2], m(r[1][0], r[2][1], r[1][1], r[2][0])),
    )
}

// ---- criteria

fn h9_end_to_end(cx: &mut Ctx) -> Check {
    let k = f9();
    let (o, l, i) = (Fe::ZERO, Fe::ONE, k.gen());
    let (code, cert) = cx.run("check", "h9_inner.json")?;
    ensure(code == 0, format!("exit {code}"))?;
    ensure(verdicts(&cert).iter().all(|(_, v)| v == "pass") && verdicts(&cert).len() == 4, "not all of (a)-(d) pass")?;
    let d = wire::divisor_from_json(&k, &report(&cert)["divisor"]).map_err(|e| e.to_string())?;
    let i2 = k.add(i, i);
    let expected = Divisor::from_terms([pt(&k, [o, o, l]), pt(&k, [o, l, o]), pt(&k, [o, i, l]), pt(&k, [o, i2, l])].map(|p| (p, 1)));
    ensure(d == expected, format!("D = {}", d.render(&k)))?;
    ensure(d.support().all(|p| p.coords()[0].is_zero()), "D is not on X = 0")?;
    let cs = fe_list(&k, &condition(&cert, "d").ok_or("no (d)")?["evidence"]["coefficients"])?;
    ensure(proportional(&k, &cs, &[o, l, i2]), "span coefficients are not proportional to (0, 1, 2i)")
}

fn h9_construction(cx: &mut Ctx) -> Check {
    let k = f9();
    let (o, l, i) = (Fe::ZERO, Fe::ONE, k.gen());
    let (code, cert) = cx.run("construct", "h9_inner.json")?;
    ensure(code == 0, format!("exit {code}"))?;
    let image = model_image(&k, &cert)?;
    ensure(image.degree() == 4, "image degree is not 4")?;
    let target = PlaneCurve::new(TriPoly::from_terms(&k, [([3, 1, 0], l), ([1, 3, 0], l), ([0, 0, 4], k.from_i64(-1))])).unwrap();
    let found = matches!(projective_equivalence(&target, &[], &image, &[]), Ok(Equivalence::Found { .. }));
    ensure(found, "image is not equivalent to U^3V + UV^3 - W^4")?;
    ensure(cert["body"]["model"]["birational"] == true, "birational flag not set")?;
    let ms = marks(&k, &cert)?;
    ensure(ms == vec![pt(&k, [o, l, o]), pt(&k, [l, o, o]), pt(&k, [i, l, o])], "marks differ")?;
    ensure(ms.iter().all(|m| m.coords()[2].is_zero()), "a mark is off W = 0")?;
    let certs = cert["body"]["certificates"].as_array().ok_or("no Galois certificates")?;
    ensure(
        certs.len() == 3 && certs.iter().all(|c| c["artin"] == true && c["inner"] == true && c["group_order"] == 3),
        "a Galois certificate is not positive with order 3",
    )
}

fn fq9_end_to_end(cx: &mut Ctx) -> Check {
    let k = f9();
    let (code, cert) = cx.run("check", "fq9_outer.json")?;
    ensure(code == 0, format!("check exit {code}"))?;
    let d = wire::divisor_from_json(&k, &report(&cert)["divisor"]).map_err(|e| e.to_string())?;
    // {Z = 0} on X^4 + Y^4 + Z^4: points (x : 1 : 0) with x^4 = -1
    let line: Vec<ProjPoint> = k
        .elements()
        .filter(|&x| k.add(k.pow(x, 4), Fe::ONE).is_zero())
        .map(|x| pt(&k, [x, Fe::ONE, Fe::ZERO]))
        .collect();
    ensure(line.len() == 4, "oracle expects four points on Z = 0")?;
    ensure(d == Divisor::from_terms(line.iter().map(|&p| (p, 1))), format!("D = {}", d.render(&k)))?;
    let (code, cert) = cx.run("construct", "fq9_outer.json")?;
    ensure(code == 0, format!("construct exit {code}"))?;
    let image = model_image(&k, &cert)?;
    ensure(image.degree() == 4, "model degree is not 4")?;
    let ms = marks(&k, &cert)?;
    ensure(ms.len() == 3, "three marks expected")?;
    ensure(det3(&k, [ms[0].coords(), ms[1].coords(), ms[2].coords()]).is_zero(), "marks are not collinear")?;
    ensure(ms.iter().all(|m| !image.contains(m.coords())), "a mark lies on the image")?;
    let q = wire::point_from_json(&k, &cert["body"]["q_image"]).map_err(|e| e.to_string())?;
    ensure(image.contains(q.coords()), "φ(Q) is not on the image")?;
    ensure(det3(&k, [ms[0].coords(), ms[1].coords(), q.coords()]).is_zero(), "φ(Q) is off the line of the marks")
}

fn negatives(cx: &mut Ctx) -> Check {
    for (file, label) in [("h9_broken_b.json", "b"), ("h9_broken_c.json", "c")] {
        let (code, cert) = cx.run("check", file)?;
        ensure(code == 1, format!("{file}: exit {code}"))?;
        let failed: Vec<String> = verdicts(&cert).into_iter().filter(|(_, v)| v == "fail").map(|(l, _)| l).collect();
        ensure(failed == vec![label.to_string()], format!("{file}: failing conditions {failed:?}"))?;
        let before: Vec<(String, String)> =
            verdicts(&cert).into_iter().take_while(|(l, _)| l != label).collect();
        ensure(before.iter().all(|(_, v)| v == "pass"), format!("{file}: an earlier condition does not pass"))?;
    }
    Ok(())
}

fn extension(cx: &mut Ctx) -> Check {
    let k = f9();
    let (o, l, i) = (Fe::ZERO, Fe::ONE, k.gen());
    let (code, cert) = cx.run("extend", "h9_extend.json")?;
    ensure(code == 0, format!("exit {code}"))?;
    let body = &cert["body"];
    let cs = body["conditions"].as_array().ok_or("no conditions")?;
    ensure(cs.len() == 3 && cs.iter().all(|c| c["verdict"] == "pass"), "(a), (b), (c) are not all positive")?;
    let m = wire::matrix_from_json(&k, &body["matrix"]).map_err(|e| e.to_string())?;
    let expected = ProjMap::new(&k, [[l, o, o], [k.add(i, i), l, o], [o, o, l]]).unwrap();
    ensure(m == expected, format!("σ̃ = {}", m.render()))?;
    ensure(body["fast_path"] == true && body["extendable"] == true, "fast path and divisor path disagree")?;
    // the symbolic identity, re-checked from the file alone
    let path = &cx.certs.last().unwrap().1;
    let (code, out) = cx.galpt(&["verify", "--cert", path.to_str().unwrap()]);
    ensure(code == 0 && out.contains("φ∘σ = σ̃∘φ"), format!("identity not certified: {out}"))
}

fn equivalence(cx: &mut Ctx) -> Check {
    for file in ["h9_inner.json", "fq9_outer.json"] {
        let (code, cert) = cx.run("equiv", file)?;
        ensure(code == 0, format!("{file}: exit {code}"))?;
        ensure(cert["body"]["seeds"] == serde_json::json!([1, 2]), format!("{file}: seeds are not 1 and 2"))?;
        let k = f9();
        let models = cert["body"]["models"].as_array().ok_or("no models")?;
        let a = wire::poly_from_json(&k, &models[0]["image"]).map_err(|e| e.to_string())?;
        let b = wire::poly_from_json(&k, &models[1]["image"]).map_err(|e| e.to_string())?;
        let m = wire::matrix_from_json(&k, &cert["body"]["map"]).map_err(|e| e.to_string())?;
        let moved = a.compose_linear(m.matrix());
        let (e, lead) = b.leading_term().ok_or("empty image")?;
        ensure(moved == b.scale(k.div(moved.coeff(e), lead)), format!("{file}: map does not carry one image onto the other"))?;
    }
    Ok(())
}

fn oracle(cx: &mut Ctx) -> Check {
    for (file, groups) in [("h9_inner.json", 3), ("fq9_outer.json", 3)] {
        let (code, cert) = cx.run("oracle", file)?;
        ensure(code == 0, format!("{file}: exit {code}"))?;
        let runs = cert["body"]["runs"].as_array().ok_or("no runs")?;
        ensure(runs.len() == groups, format!("{file}: {} runs", runs.len()))?;
        for r in runs {
            ensure(r["passes"] == r["artin"] && r["artin"] == true, format!("{file}: oracle and Artin disagree on {}", r["t"]["text"]))?;
            ensure(r["trials"].as_array().map_or(0, Vec::len) == 10, format!("{file}: not 10 trials"))?;
        }
    }
    // (Y/Z, diag(i, 1, 1)) on the Fermat quartic is the first run there
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cx.certs.last().unwrap().1).unwrap()).unwrap();
    ensure(cert["body"]["runs"][0]["t"]["text"] == "(Y)/(Z)", "first Fermat run is not Y/Z")
}

fn properties(_: &mut Ctx) -> Check {
    let start = Instant::now();
    for (name, suite) in props::SUITES {
        suite(props::CASES).map_err(|e| format!("{name}: {e}"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(60), format!("suites took {:.1?}", start.elapsed()))
}

fn round_trip(cx: &mut Ctx) -> Check {
    ensure(!cx.certs.is_empty(), "no certificates were emitted")?;
    let certs = cx.certs.clone();
    for (args, path) in &certs {
        let (code, out) = cx.galpt(&["verify", "--cert", path.to_str().unwrap()]);
        ensure(code == 0, format!("verify {} exit {code}: {out}", path.display()))?;
        let again = cx.dir.path().join("again.json");
        let mut argv: Vec<&str> = args.iter().map(String::as_str).collect();
        argv[3] = again.to_str().unwrap();
        cx.galpt(&argv);
        let (a, b) = (std::fs::read(path).unwrap(), std::fs::read(&again).unwrap());
        ensure(a == b, format!("`{} {}` is not byte-identical across runs", args[0], args[1]))?;
    }
    // and a tampered file is refused
    let (_, path) = &certs[0];
    let text = std::fs::read_to_string(path).unwrap().replacen("\"pass\"", "\"fail\"", 1);
    let bad = cx.dir.path().join("tampered.json");
    std::fs::write(&bad, text).unwrap();
    let (code, _) = cx.galpt(&["verify", "--cert", bad.to_str().unwrap()]);
    ensure(code == 1, format!("tampered certificate gave exit {code}"))
}

fn main() {
    let mut cx = Ctx { dir: tempfile::tempdir().expect("temporary directory"), certs: Vec::new() };
    let criteria: [(&str, Option<u64>, fn(&mut Ctx) -> Check); 9] = [
        ("H9 three-inner end-to-end", Some(10), h9_end_to_end),
        ("construction of the H9 plane model", Some(10), h9_construction),
        ("FQ9 three-outer end-to-end", Some(60), fq9_end_to_end),
        ("negative localization", None, negatives),
        ("linear extension of σ", None, extension),
        ("projective equivalence of seeded constructions", None, equivalence),
        ("fiber oracle agrees with the Artin verdicts", None, oracle),
        ("property suites", Some(60), properties),
        ("certificate round trip", None, round_trip),
    ];
    let mut failures = 0;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut res = f(&mut cx);
        let took = start.elapsed();
        if let (Ok(()), Some(s)) = (&res, limit) {
            if took > Duration::from_secs(*s) {
                res = Err(format!("took {took:.1?}, limit {s} s"));
            }
        }
        match res {
            Ok(()) => println!("PASS {} {name} ({:.2} s)", n + 1, took.as_secs_f64()),
            Err(e) => {
                failures += 1;
                println!("FAIL {} {name} ({:.2} s): {e}", n + 1, took.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria pass");
}
