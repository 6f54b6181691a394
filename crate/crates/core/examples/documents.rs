//! Loading JSON documents and driving the command layer in-process.
//!
//! `cargo run --example documents`

use gerbes::io::Registry;

const DOCS: &str = r#"[
  {"kind": "complex", "name": "square", "body": {
    "vertices": ["a", "b", "c", "d"],
    "facets": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]]}},
  {"kind": "cover", "name": "halves", "body": {"complex": "square", "members": {
    "L": [["a", "b"], ["b", "c"]],
    "R": [["c", "d"], ["d", "a"]]}}},
  {"kind": "cochain", "name": "winding", "body": {
    "complex": "square", "degree": 1, "coeff": "Q/Z", "values": [[["a", "b"], "1/3"]]}}
]"#;

fn main() -> gerbes::Result<()> {
    let reg = Registry::load(&[("inline.json".into(), DOCS.into())])?;
    let cover = &reg.covers["halves"];
    println!("nerve of the two halves: {:?}", cover.nerve().f_vector());
    println!("winding cochain: {:?}", reg.cochains["winding"].values().iter().map(|(i, v)| (i, v.to_string())).collect::<Vec<_>>());

    let bad = r#"{"kind": "cochain", "name": "x", "body": {"complex": "s2", "degree": 0, "coeff": "Q", "values": [[["0"], 0.5]]}}"#;
    println!("float input: {}", Registry::load(&[("bad.json".into(), bad.into())]).unwrap_err());

    let out = gerbes::cli::run(["gerbes", "cohomology", "--complex", "rp2", "--deg", "2", "--coeff", "Z"]);
    print!("cli (exit {}): {}", out.code, out.stdout);
    Ok(())
}
