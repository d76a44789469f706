use donorpdf::grammar::{match_sequential, parse_form, Registry};
use donorpdf::synth::{document_content, expected_lines, KINDS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small edits that sometimes break a page and sometimes do not.
fn damage(lines: &mut Vec<String>, rng: &mut ChaCha8Rng) {
    match rng.gen_range(0..5) {
        0 => {}
        1 if lines.len() > 4 => {
            let i = rng.gen_range(3..lines.len());
            lines.remove(i);
        }
        2 => {
            let i = rng.gen_range(3..lines.len());
            lines.insert(i, String::new());
        }
        3 => {
            for l in lines.iter_mut() {
                *l = l.replace("Dosage:", "Dose:");
            }
        }
        _ => {
            let i = rng.gen_range(3..lines.len());
            let dup = lines[i].clone();
            lines.insert(i, dup);
        }
    }
}

#[test]
fn composed_and_sequential_matching_agree() {
    let registry = Registry::builtin().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut pages, mut parsed) = (0, 0);
    let mut index = 0;
    while pages < 1000 {
        let kind = KINDS[index % KINDS.len()];
        let content = document_content(17, index, kind).unwrap();
        index += 1;
        for page in &content.pages {
            let mut lines = expected_lines(&page.page);
            damage(&mut lines, &mut rng);
            let Some(grammar) = registry.identify(&lines) else { continue };
            let composed = parse_form(grammar, &lines).is_ok();
            let sequential = match_sequential(grammar, &lines).is_ok();
            assert_eq!(composed, sequential, "{} page:\n{}", grammar.form_id, lines.join("\n"));
            pages += 1;
            parsed += usize::from(composed);
        }
    }
    // The edits must exercise both outcomes.
    assert!(parsed > 100 && parsed < pages, "{parsed}/{pages}");
}
