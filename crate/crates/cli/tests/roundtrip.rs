use proptest::prelude::*;
use reltilt_cli::bqa::{
    parse, serialize, strip_spans, AlgebraFile, ArrowDecl, CatalogDecl, ModuleDecl, SectionLines, Spanned, Term,
};

fn unspanned<T>(value: T) -> Spanned<T> {
    Spanned { value, line: 0, col: 0 }
}

fn ident(prefix: &'static str) -> impl Strategy<Value = String> {
    "[a-z0-9]{0,3}".prop_map(move |s| format!("{prefix}{s}"))
}

fn module(vertices: Vec<String>, arrows: Vec<String>) -> impl Strategy<Value = ModuleDecl> {
    let n = vertices.len();
    (
        ident("m"),
        prop::collection::vec(0usize..3, n),
        prop::collection::vec((prop::sample::select(arrows), 0usize..3, 0usize..3), 0..3),
    )
        .prop_flat_map(|(name, dims, shapes)| {
            let mats: Vec<_> = shapes
                .into_iter()
                .map(|(a, r, c)| (Just(a), prop::collection::vec(prop::collection::vec(-4i64..5, c), r)))
                .collect();
            (Just(name), Just(dims), mats)
        })
        .prop_map(|(name, dims, matrices)| ModuleDecl { name, dims, matrices })
}

fn algebra_file() -> impl Strategy<Value = AlgebraFile> {
    (prop::collection::btree_set(ident("v"), 1..4), prop::collection::btree_set(ident("a"), 1..4))
        .prop_flat_map(|(vs, arrow_names)| {
            let vs: Vec<String> = vs.into_iter().collect();
            let names: Vec<String> = arrow_names.into_iter().collect();
            let k = names.len();
            let ends = prop::collection::vec((prop::sample::select(vs.clone()), prop::sample::select(vs.clone())), k);
            let term =
                (prop_oneof![-3i64..0, 1i64..4], prop::collection::vec(prop::sample::select(names.clone()), 1..4))
                    .prop_map(|(coeff, path)| Term { coeff, path });
            let catalog = prop_oneof![
                Just(None),
                prop::collection::vec(0usize..4, vs.len()).prop_map(|b| Some(CatalogDecl::Bound(b))),
                prop::collection::vec(ident("P"), 1..4).prop_map(|n| Some(CatalogDecl::Explicit(n))),
            ];
            (
                Just(vs.clone()),
                Just(names.clone()),
                ends,
                prop::sample::select(vec![2u64, 3, 5, 7]),
                1usize..5,
                prop::collection::vec(prop::collection::vec(term, 1..3), 0..3),
                prop::collection::vec(module(vs, names), 0..3),
                prop::collection::vec(ident("P"), 1..4),
                catalog,
            )
        })
        .prop_map(|(vertices, names, ends, p, nilpotency, relations, modules, generator, catalog)| AlgebraFile {
            lines: SectionLines::default(),
            p,
            vertices,
            arrows: names
                .into_iter()
                .zip(ends)
                .map(|(name, (source, target))| ArrowDecl { name, source, target })
                .collect(),
            nilpotency,
            relations,
            modules: modules.into_iter().map(unspanned).collect(),
            generator: generator.into_iter().map(unspanned).collect(),
            catalog: catalog.map(unspanned),
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(file in algebra_file()) {
        let text = serialize(&file);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(strip_spans(&back), file);
        prop_assert_eq!(serialize(&back), text);
    }
}

#[test]
fn fixtures_roundtrip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "bqa") {
            let file = parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
            let again = parse(&serialize(&file)).unwrap();
            assert_eq!(strip_spans(&again), strip_spans(&file), "{}", path.display());
        }
    }
}
