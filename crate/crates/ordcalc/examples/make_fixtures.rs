//! Regenerates the JSON fixture corpus under `fixtures/` in the canonical
//! serializer format, so that parse followed by serialize is the identity
//! on every shipped file.

use std::collections::BTreeMap;
use std::path::Path;

use ordcalc::dynamics::swap_generators;
use ordcalc::io::{
    self, ActionDoc, Document, MorphismDoc, NamedSemigroup, RelationDoc,
};
use ordcalc::wsemi::{fixture_names, make_fixture, FixtureSpec};

fn named(spec: &FixtureSpec) -> NamedSemigroup {
    NamedSemigroup {
        names: fixture_names(spec).expect("names"),
        semigroup: make_fixture(spec).expect("fixture"),
    }
}

fn write(dir: &Path, name: &str, doc: &Document) {
    let path = dir.join(name);
    std::fs::write(&path, io::serialize(doc)).expect("write fixture");
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("fixtures dir");

    for (file, spec) in [
        ("nbar1.json", FixtureSpec::Nbar(1)),
        ("nbar2.json", FixtureSpec::Nbar(2)),
        ("nbar3.json", FixtureSpec::Nbar(3)),
        ("ninf1.json", FixtureSpec::Ninf(1)),
        ("latac2.json", FixtureSpec::lat_antichain(2)),
        (
            "nbar2sq.json",
            FixtureSpec::Prod(vec![FixtureSpec::Nbar(2), FixtureSpec::Nbar(2)]),
        ),
    ] {
        let ns = named(&spec);
        write(&dir, file, &Document::Semigroup(io::semigroup_to_doc(&ns)));
    }

    // Swap action on the square.
    let sq = named(&FixtureSpec::Prod(vec![
        FixtureSpec::Nbar(2),
        FixtureSpec::Nbar(2),
    ]));
    let gens = swap_generators(3);
    let action = io::action_to_doc(&gens, &sq, "nbar2sq.json");
    write(&dir, "swap.json", &Document::Action(action));

    // The collapsing seed relation on NBAR(2).
    let line = named(&FixtureSpec::Nbar(2));
    let rel = RelationDoc {
        kind: "relation".into(),
        on: "nbar2.json".into(),
        pairs: vec![["2".into(), "0".into()]],
    };
    let _ = &line;
    write(&dir, "collapse.json", &Document::Relation(rel));

    // The saturating addition morphism from the square onto the line.
    let map: BTreeMap<String, String> = (0..sq.semigroup.size())
        .map(|i| {
            let value = (i / 3 + i % 3).min(2);
            (sq.names[i].clone(), value.to_string())
        })
        .collect();
    let morphism = MorphismDoc {
        kind: "morphism".into(),
        from: "nbar2sq.json".into(),
        to: "nbar2.json".into(),
        map,
    };
    write(&dir, "addition.json", &Document::Morphism(morphism));

    // An action document with a broken generator, kept as a negative
    // parse-and-validate example.
    let bad = ActionDoc {
        kind: "action".into(),
        on: "nbar2.json".into(),
        generators: vec![[("0", "0"), ("1", "2"), ("2", "1")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()],
    };
    write(&dir, "bad_action.json", &Document::Action(bad));
}
