//! Random form content: what each generated page says, and the records a
//! correct extraction must produce from it.

use chrono::{Duration, NaiveDate, NaiveDateTime, NaiveTime};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::page::{CheckboxGlyph, Page, PageBuilder, MARGIN};
use crate::grammar::Value;
use crate::pdf::format_number;
use crate::records::{FormRecord, VitalsSeriesRow, VitalsTable};

/// Document kinds the generator can produce, by root form id.
pub const KINDS: &[&str] =
    &["dcd_flowsheet", "flowsheet", "kidney_perfusion_flow_sheet", "liver_data", "referral_worksheet"];

/// Subform pages of the FLOWSHEET, in their usual order.
pub const FLOWSHEET_SUBFORMS: &[&str] =
    &["vital_signs", "vent_settings", "intake", "medications_dosage", "output", "comments"];

/// What a page must extract to.
#[derive(Debug, Clone, PartialEq)]
pub enum PageTruth {
    Vitals(VitalsTable),
    Form(FormRecord),
    /// Bookkeeping only (the FLOWSHEET cover).
    Cover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageContent {
    pub form_id: String,
    pub page: Page,
    pub truth: PageTruth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocContent {
    pub kind: String,
    pub pages: Vec<PageContent>,
    pub donor_id: Option<String>,
    pub form_date: Option<NaiveDate>,
    pub created: NaiveDateTime,
    pub version_note: String,
    /// Every drawn checkbox, page order then reading order.
    pub checkboxes: Vec<bool>,
}

// ---- value helpers ---------------------------------------------------------

const FIRST: &[&str] = &["Ann", "Bo", "Carla", "David", "Elena", "Farid", "Grace", "Hiro", "Ines", "Jamal", "Kara", "Liam"];
const LAST: &[&str] = &["Lee", "Chan", "Garcia", "Novak", "Smith", "Okafor", "Rossi", "Tanaka", "Weber", "Silva"];
const HOSPITALS: &[&str] =
    &["St. Mary's Medical Center", "General Hospital", "Mercy Regional", "University Hospital", "Lakeside Clinic"];
const ZONES: &[&str] = &["EST", "EDT", "CST", "CDT", "MST", "PST"];
const COMMENTS: &[&str] = &[
    "Patient stable on current drips",
    "Family at bedside",
    "Norepinephrine titrated to keep MAP above 65",
    "Chest x-ray repeated at 0600",
    "Bronchoscopy done, minimal secretions",
    "OR time confirmed for 1400",
    "Echo shows EF 55%",
    "Urine output adequate",
];

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or_default()
}

fn donor_id(rng: &mut ChaCha8Rng) -> String {
    let letters: String = (0..4).map(|_| rng.gen_range(b'A'..=b'Z') as char).collect();
    format!("{letters}{:03}", rng.gen_range(0..1000))
}

fn date(rng: &mut ChaCha8Rng) -> NaiveDate {
    NaiveDate::from_ymd_opt(2019, 1, 1).expect("valid date") + Duration::days(rng.gen_range(0..1500))
}

fn time(rng: &mut ChaCha8Rng) -> NaiveTime {
    NaiveTime::from_hms_opt(rng.gen_range(0..24), rng.gen_range(0..60), 0).expect("valid time")
}

fn show_date(d: NaiveDate, rng: &mut ChaCha8Rng) -> String {
    if rng.gen_bool(0.8) {
        d.format("%Y-%m-%d").to_string()
    } else {
        d.format("%-m/%-d/%Y").to_string()
    }
}

fn show_time(t: NaiveTime, rng: &mut ChaCha8Rng) -> String {
    if rng.gen_bool(0.7) {
        t.format("%H:%M").to_string()
    } else {
        t.format("%H%M").to_string()
    }
}

/// Integers of four or more digits sometimes get thousands separators.
fn show_number(v: f64, rng: &mut ChaCha8Rng) -> String {
    let s = format_number(v);
    if v.fract() == 0.0 && v.abs() >= 1000.0 && rng.gen_bool(0.5) {
        let digits = s.trim_start_matches('-');
        let mut out = String::new();
        for (i, c) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i).is_multiple_of(3) {
                out.push(',');
            }
            out.push(c);
        }
        return out;
    }
    s
}

fn person(rng: &mut ChaCha8Rng) -> String {
    let name = format!("{} {}", pick(rng, FIRST), pick(rng, LAST));
    if rng.gen_bool(0.6) {
        format!("Dr. {name}")
    } else {
        name
    }
}

/// Canonical Yes/No plus one of its accepted spellings.
fn yes_no(rng: &mut ChaCha8Rng) -> (Value, String) {
    let yes = rng.gen_bool(0.5);
    let spellings: &[&str] = if yes { &["Yes", "Y", "YES", "yes"] } else { &["No", "N", "NO", "no"] };
    (Value::Text(if yes { "Yes" } else { "No" }.into()), pick(rng, spellings).to_string())
}

fn opt<T>(rng: &mut ChaCha8Rng, p_present: f64, f: impl FnOnce(&mut ChaCha8Rng) -> T) -> Option<T> {
    if rng.gen_bool(p_present) {
        Some(f(rng))
    } else {
        None
    }
}

fn glyph(checked: bool, rng: &mut ChaCha8Rng) -> CheckboxGlyph {
    match (checked, rng.gen_bool(0.5)) {
        (false, _) => CheckboxGlyph::Empty,
        (true, true) => CheckboxGlyph::Filled,
        (true, false) => CheckboxGlyph::Crossed,
    }
}

/// Accumulates a page's expected values by field name.
struct Fields(Vec<(String, Value)>);

impl Fields {
    fn new() -> Self {
        Fields(Vec::new())
    }

    fn set(&mut self, name: &str, v: Value) {
        self.0.push((name.to_string(), v));
    }

    fn record(self, form_id: &str, page: usize, rows: Vec<Vec<(String, Value)>>) -> FormRecord {
        FormRecord { form_id: form_id.into(), page, fields: self.0, rows, diagnostics: Vec::new() }
    }
}

fn num(v: Option<f64>) -> Value {
    v.map_or(Value::Missing, Value::Number)
}

fn time_value(t: Option<NaiveTime>) -> Value {
    t.map_or(Value::Missing, Value::Time)
}

// ---- DCD flowsheet ---------------------------------------------------------

fn preop_page(rng: &mut ChaCha8Rng, donor: &str, day: NaiveDate, boxes: &mut Vec<bool>) -> PageContent {
    let mut f = Fields::new();
    let mut b = PageBuilder::new();
    b.title("DCD FLOWSHEET");
    b.ruled_title("PRE-OPERATIVE MANAGEMENT");
    f.set("donor_id", Value::Text(donor.into()));
    f.set("procedure_date", Value::Date(day));
    let day_s = show_date(day, rng);
    b.fields(&[("Donor ID:", Some(donor.into()), 7), ("Procedure Date:", Some(day_s), 10)]);

    let location = opt(rng, 0.9, |r| pick(r, &["OR", "ICU", "PACU"]).to_string());
    let withdrawal = opt(rng, 0.9, time);
    f.set("withdrawal_location", location.clone().map_or(Value::Missing, Value::Text));
    f.set("withdrawal_time", time_value(withdrawal));
    let w = withdrawal.map(|t| show_time(t, rng));
    b.fields(&[("Withdrawal Location:", location, 4), ("Withdrawal Time:", w, 5)]);

    let (ext, ext_s) = yes_no(rng);
    let ext_time = opt(rng, 0.8, time);
    f.set("extubated", ext);
    f.set("extubation_time", time_value(ext_time));
    let et = ext_time.map(|t| show_time(t, rng));
    b.fields(&[("Extubated:", Some(ext_s), 4), ("Extubation Time:", et, 5)]);

    let family = rng.gen_bool(0.5);
    boxes.push(family);
    f.set("family_present", Value::Text(if family { "Yes" } else { "No" }.into()));
    let g = glyph(family, rng);
    b.checkboxes(&[("Family Present:", Some(g))]);

    let (comfort, comfort_s) = yes_no(rng);
    let morphine = opt(rng, 0.7, |r| r.gen_range(2..=10) as f64);
    f.set("comfort_medication", comfort);
    f.set("morphine_dose_mg", num(morphine));
    b.fields(&[("Comfort Medication:", Some(comfort_s), 4), ("Morphine:", morphine.map(|m| format!("{} mg", format_number(m))), 6)]);

    // Heparin: box state and dosage evidence vary independently of each
    // other but never contradict.
    let scenario = rng.gen_range(0..5);
    let (box_glyph, dosage, heparin) = match scenario {
        0 => (Some(glyph(true, rng)), true, Some("Yes")),
        1 => (Some(glyph(true, rng)), false, Some("Yes")),
        2 => (Some(CheckboxGlyph::Empty), false, Some("No")),
        3 => (None, true, Some("Yes")),
        _ => (None, false, None),
    };
    if let Some(g) = box_glyph {
        boxes.push(g.is_checked());
    }
    f.set("heparin", heparin.map_or(Value::Missing, |h| Value::Text(h.into())));
    b.checkboxes(&[("Heparin:", box_glyph)]);
    let (dose, unit, htime) = if dosage {
        let dose = rng.gen_range(5..=40) as f64 * 1000.0;
        (Some(dose), Some(pick(rng, &["units", "U", "IU"]).to_string()), opt(rng, 0.8, time))
    } else {
        (None, None, None)
    };
    f.set("heparin_dosage", num(dose));
    f.set("heparin_unit", unit.clone().map_or(Value::Missing, Value::Text));
    f.set("heparin_time", time_value(htime));
    let dose_s = dose.map(|d| format!("{} {}", show_number(d, rng), unit.unwrap_or_default()));
    let ht = htime.map(|t| show_time(t, rng));
    b.fields(&[("Dosage:", dose_s, 12), ("Time:", ht, 5)]);

    let phentolamine = opt(rng, 0.8, yes_no);
    f.set("phentolamine", phentolamine.as_ref().map_or(Value::Missing, |p| p.0.clone()));
    b.fields(&[("Phentolamine:", phentolamine.map(|p| p.1), 4)]);

    for (label, name) in [("Attending Physician:", "attending_physician"), ("Declaring Physician:", "declaring_physician")] {
        let p = person(rng);
        f.set(name, Value::Text(p.clone()));
        b.fields(&[(label, Some(p), 20)]);
    }
    for pair in [
        [("Asystole Time:", "asystole_time"), ("Time of Death:", "death_time")],
        [("Incision Time:", "incision_time"), ("Cross Clamp Time:", "cross_clamp_time")],
    ] {
        let mut cells = Vec::new();
        for (label, name) in pair {
            let t = opt(rng, 0.85, time);
            f.set(name, time_value(t));
            cells.push((label, t.map(|t| show_time(t, rng)), 5));
        }
        b.fields(&cells);
    }
    let solution = opt(rng, 0.9, |r| pick(r, &["UW", "HTK", "Custodiol", "IGL-1"]).to_string());
    let canonical = solution.as_deref().map(|s| if s == "Custodiol" { "HTK" } else { s });
    f.set("flush_solution", canonical.map_or(Value::Missing, |s| Value::Text(s.into())));
    let volume = opt(rng, 0.9, |r| r.gen_range(2..=10) as f64 * 500.0);
    f.set("flush_volume_ml", num(volume));
    let vol_s = volume.map(|v| format!("{} mL", show_number(v, rng)));
    b.fields(&[("Flush Solution:", solution, 9), ("Flush Volume:", vol_s, 8)]);

    PageContent {
        form_id: "pre_operative_management".into(),
        page: b.finish(),
        truth: PageTruth::Form(f.record("pre_operative_management", 0, Vec::new())),
    }
}

/// Vitals table columns: minute, time, then the six measurements.
pub const VITALS_COLS: [usize; 8] = [MARGIN, 11, 36, 44, 52, 60, 68, 76];

fn vitals_page(donor: &str, day_s: String, rows: &[VitalsSeriesRow], blank_missing: &[bool]) -> Page {
    let mut b = PageBuilder::new();
    b.title("DCD FLOWSHEET");
    b.fields(&[("Donor ID:", Some(donor.into()), 7), ("Date:", Some(day_s), 10)]);
    let heads = ["Minute", "Time", "HR", "SBP", "DBP", "MAP", "RR", "SaO2"];
    let header: Vec<(&str, usize)> = heads.iter().copied().zip(VITALS_COLS).collect();
    b.header(&header);
    for (r, &blank) in rows.iter().zip(blank_missing) {
        let vals = [r.hr, r.bp_systolic, r.bp_diastolic, r.map, r.rr, r.sao2];
        let mut cells = vec![(r.minute.to_string(), VITALS_COLS[0]), (r.time.clone(), VITALS_COLS[1])];
        if !blank {
            for (v, col) in vals.iter().zip(&VITALS_COLS[2..]) {
                cells.push((v.map_or("NaN".into(), format_number), *col));
            }
        }
        b.row(&cells);
    }
    b.finish()
}

fn vitals_series(rng: &mut ChaCha8Rng, day: NaiveDate, rows: Option<usize>) -> (Vec<VitalsSeriesRow>, Vec<bool>) {
    let n = rows.unwrap_or_else(|| if rng.gen_bool(0.05) { 0 } else { rng.gen_range(5..=35) });
    let zone = pick(rng, ZONES).to_string();
    let start = day.and_time(time(rng));
    let arrest = rng.gen_range(0..=n.max(1));
    let zeros = rng.gen_range(0..=8);
    let (mut hr, mut sbp, mut dbp, mut rr, mut sao2) =
        (rng.gen_range(90.0..130.0f64), rng.gen_range(110.0..200.0f64), rng.gen_range(60.0..105.0f64), rng.gen_range(8.0..30.0f64), rng.gen_range(80.0..100.0f64));
    let mut rows = Vec::new();
    let mut blank = Vec::new();
    let trailing_blank = rng.gen_range(0..=3);
    for minute in 0..n {
        let local = start + Duration::minutes(minute as i64);
        let time = format!("{} {zone}", local.format("%Y-%m-%d %H:%M"));
        let phase = if minute < arrest { 0 } else if minute < arrest + zeros { 1 } else { 2 };
        let vals: [Option<f64>; 6] = match phase {
            0 => {
                let v = [hr, sbp, dbp, (sbp + 2.0 * dbp) / 3.0, rr, sao2].map(|x| Some(x.round().max(0.0)));
                hr *= rng.gen_range(0.8..1.05);
                sbp *= rng.gen_range(0.7..1.05);
                dbp *= rng.gen_range(0.7..1.05);
                rr *= rng.gen_range(0.6..1.1);
                sao2 *= rng.gen_range(0.6..1.0);
                // Occasional single unreadable cell.
                let mut v = v;
                if rng.gen_bool(0.05) {
                    v[rng.gen_range(0..6)] = None;
                }
                v
            }
            1 => [Some(0.0); 6],
            _ => [None; 6],
        };
        blank.push(phase == 2 && minute + trailing_blank >= n);
        rows.push(VitalsSeriesRow {
            minute: minute as i64,
            timestamp: crate::records::parse_timestamp(&time),
            time,
            hr: vals[0],
            bp_systolic: vals[1],
            bp_diastolic: vals[2],
            map: vals[3],
            rr: vals[4],
            sao2: vals[5],
        });
    }
    (rows, blank)
}

/// DCD flowsheet: pre-op page plus vitals page, with `vitals_rows` rows
/// or a random count.
pub fn dcd_flowsheet(rng: &mut ChaCha8Rng, vitals_rows: Option<usize>) -> DocContent {
    let donor = donor_id(rng);
    let day = date(rng);
    let mut boxes = Vec::new();
    let preop = preop_page(rng, &donor, day, &mut boxes);
    let (rows, blank) = vitals_series(rng, day, vitals_rows);
    let day_s = show_date(day, rng);
    let vitals = PageContent {
        form_id: "dcd_flowsheet".into(),
        page: vitals_page(&donor, day_s, &rows, &blank),
        truth: PageTruth::Vitals(VitalsTable { rows, diagnostics: Vec::new() }),
    };
    doc("dcd_flowsheet", rng, vec![preop, vitals], Some(donor), Some(day), boxes)
}

// ---- FLOWSHEET -------------------------------------------------------------

fn flowsheet_cover(rng: &mut ChaCha8Rng, donor: &str, day: NaiveDate) -> PageContent {
    let mut b = PageBuilder::new();
    b.ruled_title("FLOWSHEET");
    let day_s = show_date(day, rng);
    b.fields(&[("Donor ID:", Some(donor.into()), 7), ("Date:", Some(day_s), 10)]);
    PageContent { form_id: "flowsheet".into(), page: b.finish(), truth: PageTruth::Cover }
}

fn maybe_nan(rng: &mut ChaCha8Rng, f: impl FnOnce(&mut ChaCha8Rng) -> f64) -> Option<f64> {
    let v = f(rng);
    if rng.gen_bool(0.05) {
        None
    } else {
        Some(v)
    }
}

fn cell(v: Option<f64>, rng: &mut ChaCha8Rng) -> String {
    v.map_or("NaN".into(), |v| show_number(v, rng))
}

type Row = Vec<(String, Value)>;

/// One subform page with `n` table rows.
pub fn subform_page(rng: &mut ChaCha8Rng, form_id: &str, n: usize, page: usize) -> PageContent {
    let mut b = PageBuilder::new();
    b.title("FLOWSHEET");
    let mut rows: Vec<Row> = Vec::new();
    let mut t = time(rng);
    let mut next_time = |rng: &mut ChaCha8Rng| {
        t += Duration::minutes(rng.gen_range(15..=60));
        t
    };
    let title = match form_id {
        "vital_signs" => "VITAL SIGNS",
        "vent_settings" => "VENT SETTINGS",
        "intake" => "INTAKE",
        "medications_dosage" => "Medications Dosage",
        "output" => "OUTPUT",
        _ => "Comments",
    };
    b.ruled_title(title);
    match form_id {
        "vital_signs" => {
            let cols = [MARGIN, 12, 20, 32, 40];
            b.header(&[("Time", cols[0]), ("HR", cols[1]), ("BP", cols[2]), ("Temp", cols[3]), ("SpO2", cols[4])]);
            for _ in 0..n {
                let tm = next_time(rng);
                let hr = maybe_nan(rng, |rng| rng.gen_range(50..140) as f64);
                let sys = maybe_nan(rng, |rng| rng.gen_range(80..180) as f64);
                let dia = maybe_nan(rng, |rng| rng.gen_range(40..100) as f64);
                let temp = maybe_nan(rng, |rng| rng.gen_range(350..390) as f64 / 10.0);
                let spo2 = maybe_nan(rng, |rng| rng.gen_range(85..101) as f64);
                let ts = show_time(tm, rng);
                let bp = format!("{}/{}", cell(sys, rng), cell(dia, rng));
                let cells = [ts, cell(hr, rng), bp, cell(temp, rng), cell(spo2, rng)];
                b.row(&cells.into_iter().zip(cols).collect::<Vec<_>>());
                rows.push(vec![
                    ("time".into(), Value::Time(tm)),
                    ("hr".into(), num(hr)),
                    ("bp_systolic".into(), num(sys)),
                    ("bp_diastolic".into(), num(dia)),
                    ("temp_c".into(), num(temp)),
                    ("spo2".into(), num(spo2)),
                ]);
            }
        }
        "vent_settings" => {
            let cols = [MARGIN, 12, 21, 29, 37];
            b.header(&[("Time", cols[0]), ("Mode", cols[1]), ("FiO2", cols[2]), ("PEEP", cols[3]), ("Vt", cols[4])]);
            for _ in 0..n {
                let tm = next_time(rng);
                let mode = pick(rng, &["AC", "SIMV", "PS", "CPAP", "PRVC"]);
                let fio2 = maybe_nan(rng, |rng| (rng.gen_range(21..=100) / 5 * 5).max(21) as f64);
                let peep = maybe_nan(rng, |rng| rng.gen_range(5..=15) as f64);
                let vt = maybe_nan(rng, |rng| rng.gen_range(35..=60) as f64 * 10.0);
                let cells = [show_time(tm, rng), mode.to_string(), cell(fio2, rng), cell(peep, rng), cell(vt, rng)];
                b.row(&cells.into_iter().zip(cols).collect::<Vec<_>>());
                rows.push(vec![
                    ("time".into(), Value::Time(tm)),
                    ("mode".into(), Value::Text(mode.into())),
                    ("fio2".into(), num(fio2)),
                    ("peep".into(), num(peep)),
                    ("tidal_volume_ml".into(), num(vt)),
                ]);
            }
        }
        "intake" | "output" => {
            let cols = [MARGIN, 12, 28];
            let (h2, choices): (&str, &[&str]) = if form_id == "intake" {
                ("Fluid", &["NS", "Saline", "LR", "D5W", "Albumin", "PRBC"])
            } else {
                ("Source", &["Urine", "NG", "Drain", "Chest Tube"])
            };
            b.header(&[("Time", cols[0]), (h2, cols[1]), ("Volume", cols[2])]);
            for _ in 0..n {
                let tm = next_time(rng);
                let what = pick(rng, choices);
                let canonical = if what == "Saline" { "NS" } else { what };
                let vol = maybe_nan(rng, |rng| rng.gen_range(1..=40) as f64 * 50.0);
                let cells = [show_time(tm, rng), what.to_string(), cell(vol, rng)];
                b.row(&cells.into_iter().zip(cols).collect::<Vec<_>>());
                let key = if form_id == "intake" { "fluid" } else { "source" };
                rows.push(vec![
                    ("time".into(), Value::Time(tm)),
                    (key.into(), Value::Text(canonical.into())),
                    ("volume_ml".into(), num(vol)),
                ]);
            }
        }
        "medications_dosage" => {
            let cols = [MARGIN, 12, 36, 46];
            b.header(&[("Time", cols[0]), ("Medication", cols[1]), ("Dose", cols[2]), ("Unit", cols[3])]);
            let meds: &[(&str, &str)] = &[
                ("Norepinephrine", "mcg/kg/min"),
                ("Vasopressin", "units/hr"),
                ("Heparin", "units"),
                ("Methylprednisolone", "mg"),
                ("Insulin", "units/hr"),
                ("Levothyroxine", "mcg"),
                ("Dopamine", "mcg/kg/min"),
            ];
            for _ in 0..n {
                let tm = next_time(rng);
                let (med, unit) = *meds.choose(rng).expect("non-empty");
                let dose = match unit {
                    "mcg/kg/min" => rng.gen_range(1..=30) as f64 / 100.0,
                    "units" => rng.gen_range(5..=40) as f64 * 1000.0,
                    _ => rng.gen_range(1..=250) as f64,
                };
                let cells = [show_time(tm, rng), med.to_string(), show_number(dose, rng), unit.to_string()];
                b.row(&cells.into_iter().zip(cols).collect::<Vec<_>>());
                rows.push(vec![
                    ("time".into(), Value::Time(tm)),
                    ("medication".into(), Value::Text(med.into())),
                    ("dose".into(), Value::Number(dose)),
                    ("unit".into(), Value::Text(unit.into())),
                ]);
            }
        }
        _ => {
            for _ in 0..n.min(12) {
                let c = pick(rng, COMMENTS);
                b.text(MARGIN, c);
                rows.push(vec![("comment".into(), Value::Text(c.into()))]);
            }
        }
    }
    PageContent {
        form_id: form_id.into(),
        page: b.finish(),
        truth: PageTruth::Form(Fields::new().record(form_id, page, rows)),
    }
}

fn flowsheet(rng: &mut ChaCha8Rng, subform_pages: usize) -> DocContent {
    let donor = donor_id(rng);
    let day = date(rng);
    let mut pages = vec![flowsheet_cover(rng, &donor, day)];
    for i in 0..subform_pages {
        let form = FLOWSHEET_SUBFORMS[i % FLOWSHEET_SUBFORMS.len()];
        let n = rng.gen_range(0..=14);
        pages.push(subform_page(rng, form, n, i + 1));
    }
    doc("flowsheet", rng, pages, Some(donor), Some(day), Vec::new())
}

// ---- single-page forms -----------------------------------------------------

fn kidney(rng: &mut ChaCha8Rng) -> DocContent {
    let donor = donor_id(rng);
    let day = date(rng);
    let mut f = Fields::new();
    let mut b = PageBuilder::new();
    b.ruled_title("KIDNEY PERFUSION FLOW SHEET");
    f.set("donor_id", Value::Text(donor.clone()));
    f.set("perfusion_date", Value::Date(day));
    let ds = show_date(day, rng);
    b.fields(&[("Donor ID:", Some(donor.clone()), 7), ("Date:", Some(ds), 10)]);
    let side = rng.gen_bool(0.5);
    let kidney_s = pick(rng, if side { &["Left", "L"] } else { &["Right", "R"] }).to_string();
    f.set("kidney", Value::Text(if side { "Left" } else { "Right" }.into()));
    let pump = opt(rng, 0.9, |r| pick(r, &["LifePort", "RM3", "Waters"]).to_string());
    f.set("pump", pump.clone().map_or(Value::Missing, Value::Text));
    let mut t = time(rng);
    f.set("pump_start_time", Value::Time(t));
    let start = show_time(t, rng);
    b.fields(&[("Kidney:", Some(kidney_s), 5), ("Pump:", pump, 8), ("Start Time:", Some(start), 5)]);
    let cols = [MARGIN, 12, 21, 32, 44];
    b.header(&[("Time", cols[0]), ("Flow", cols[1]), ("Pressure", cols[2]), ("Resistance", cols[3]), ("Temp", cols[4])]);
    let mut rows = Vec::new();
    for _ in 0..rng.gen_range(0..=20) {
        t += Duration::minutes(30);
        let flow = maybe_nan(rng, |rng| rng.gen_range(50..=160) as f64);
        let pressure = maybe_nan(rng, |rng| rng.gen_range(20..=40) as f64);
        let resistance = maybe_nan(rng, |rng| rng.gen_range(10..=60) as f64 / 100.0);
        let temp = maybe_nan(rng, |rng| rng.gen_range(20..=80) as f64 / 10.0);
        let cells = [
            show_time(t, rng),
            cell(flow, rng),
            cell(pressure, rng),
            resistance.map_or("NaN".into(), |r| format!("{r:.2}")),
            temp.map_or("NaN".into(), |v| format!("{v:.1}")),
        ];
        b.row(&cells.into_iter().zip(cols).collect::<Vec<_>>());
        rows.push(vec![
            ("time".into(), Value::Time(t)),
            ("flow_ml_min".into(), num(flow)),
            ("pressure_mmhg".into(), num(pressure)),
            ("resistance".into(), num(resistance)),
            ("temperature_c".into(), num(temp)),
        ]);
    }
    let page = PageContent {
        form_id: "kidney_perfusion_flow_sheet".into(),
        page: b.finish(),
        truth: PageTruth::Form(f.record("kidney_perfusion_flow_sheet", 0, rows)),
    };
    doc("kidney_perfusion_flow_sheet", rng, vec![page], Some(donor), Some(day), Vec::new())
}

/// Liver field names in declaration order, with their printed labels.
pub const LIVER_BOXES: [(&str, &str); 8] = [
    ("biopsy", "Biopsy:"),
    ("macro_steatosis", "Macrosteatosis:"),
    ("micro_steatosis", "Microsteatosis:"),
    ("fibrosis", "Fibrosis:"),
    ("inflammation", "Inflammation:"),
    ("necrosis", "Necrosis:"),
    ("cholestasis", "Cholestasis:"),
    ("vascular_anomaly", "Vascular Anomaly:"),
];

/// LIVER DATA with the given box states, or random ones.
pub fn liver(rng: &mut ChaCha8Rng, states: Option<[bool; 8]>) -> DocContent {
    let states = states.unwrap_or_else(|| std::array::from_fn(|_| rng.gen_bool(0.4)));
    let donor = donor_id(rng);
    let day = date(rng);
    let mut f = Fields::new();
    let mut b = PageBuilder::new();
    b.ruled_title("LIVER DATA");
    f.set("donor_id", Value::Text(donor.clone()));
    f.set("recovery_date", Value::Date(day));
    let ds = show_date(day, rng);
    b.fields(&[("Donor ID:", Some(donor.clone()), 7), ("Recovery Date:", Some(ds), 10)]);
    let weight = opt(rng, 0.9, |r| r.gen_range(900..=2600) as f64);
    f.set("liver_weight_g", num(weight));
    let surgeon = Some(person(rng));
    f.set("surgeon", surgeon.clone().map_or(Value::Missing, Value::Text));
    let ws = weight.map(|w| format!("{} g", show_number(w, rng)));
    b.fields(&[("Liver Weight:", ws, 7), ("Surgeon:", surgeon, 20)]);
    let appearance = opt(rng, 0.9, |r| pick(r, &["Normal", "Fatty", "Cirrhotic", "Congested"]).to_string());
    f.set("appearance", appearance.clone().map_or(Value::Missing, Value::Text));
    b.fields(&[("Appearance:", appearance, 9)]);
    b.blank();
    let glyphs: Vec<CheckboxGlyph> = states.iter().map(|&s| glyph(s, rng)).collect();
    for ((name, _), &s) in LIVER_BOXES.iter().zip(&states) {
        f.set(name, Value::Bool(s));
    }
    let line = |range: std::ops::Range<usize>| -> Vec<(&str, Option<CheckboxGlyph>)> {
        range.map(|i| (LIVER_BOXES[i].1, Some(glyphs[i]))).collect()
    };
    b.checkboxes(&line(0..4));
    b.blank();
    b.checkboxes(&line(4..8));
    let page = PageContent {
        form_id: "liver_data".into(),
        page: b.finish(),
        truth: PageTruth::Form(f.record("liver_data", 0, Vec::new())),
    };
    doc("liver_data", rng, vec![page], Some(donor), Some(day), states.to_vec())
}

fn referral(rng: &mut ChaCha8Rng) -> DocContent {
    let donor = donor_id(rng);
    let day = date(rng);
    let mut f = Fields::new();
    let mut b = PageBuilder::new();
    b.ruled_title("REFERRAL WORKSHEET");
    f.set("donor_id", Value::Text(donor.clone()));
    f.set("referral_date", Value::Date(day));
    let t = opt(rng, 0.9, time);
    f.set("referral_time", time_value(t));
    let ds = show_date(day, rng);
    let ts = t.map(|t| show_time(t, rng));
    b.fields(&[("Donor ID:", Some(donor.clone()), 7), ("Referral Date:", Some(ds), 10), ("Time:", ts, 5)]);
    let hospital = pick(rng, HOSPITALS).to_string();
    f.set("hospital", Value::Text(hospital.clone()));
    b.fields(&[("Hospital:", Some(hospital), 25)]);
    let by = Some(person(rng));
    f.set("referred_by", by.clone().map_or(Value::Missing, Value::Text));
    b.fields(&[("Referred By:", by, 20)]);
    let age = opt(rng, 0.95, |r| r.gen_range(1..=80) as f64);
    f.set("age", num(age));
    let male = rng.gen_bool(0.5);
    let sex_s = pick(rng, if male { &["Male", "M"] } else { &["Female", "F"] }).to_string();
    f.set("sex", Value::Text(if male { "Male" } else { "Female" }.into()));
    let abo = format!("{}{}", pick(rng, &["A", "B", "AB", "O"]), pick(rng, &["+", "-"]));
    f.set("abo", Value::Text(abo.clone()));
    b.fields(&[("Age:", age.map(format_number), 3), ("Sex:", Some(sex_s), 6), ("ABO:", Some(abo), 3)]);
    let cause = opt(rng, 0.9, |r| pick(r, &["Anoxia", "Head Trauma", "Stroke", "Cardiac Arrest", "Drug Intoxication"]).to_string());
    f.set("cause_of_death", cause.clone().map_or(Value::Missing, Value::Text));
    b.fields(&[("Cause of Death:", cause, 18)]);
    b.title("Notes:");
    let mut rows = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        let c = pick(rng, COMMENTS);
        b.text(MARGIN, c);
        rows.push(vec![("note".to_string(), Value::Text(c.into()))]);
    }
    let page = PageContent {
        form_id: "referral_worksheet".into(),
        page: b.finish(),
        truth: PageTruth::Form(f.record("referral_worksheet", 0, rows)),
    };
    doc("referral_worksheet", rng, vec![page], Some(donor), Some(day), Vec::new())
}

fn doc(
    kind: &str,
    rng: &mut ChaCha8Rng,
    mut pages: Vec<PageContent>,
    donor_id: Option<String>,
    form_date: Option<NaiveDate>,
    checkboxes: Vec<bool>,
) -> DocContent {
    for (i, p) in pages.iter_mut().enumerate() {
        if let PageTruth::Form(r) = &mut p.truth {
            r.page = i;
        }
    }
    let created = form_date.unwrap_or_else(|| date(rng)).and_time(time(rng));
    let version_note = format!("form revision {}", rng.gen_range(1..=9));
    DocContent { kind: kind.into(), pages, donor_id, form_date, created, version_note, checkboxes }
}

/// Content for one document of `kind`.
pub fn generate_content(kind: &str, rng: &mut ChaCha8Rng) -> Option<DocContent> {
    Some(match kind {
        "dcd_flowsheet" => dcd_flowsheet(rng, None),
        "flowsheet" => flowsheet(rng, FLOWSHEET_SUBFORMS.len()),
        "kidney_perfusion_flow_sheet" => kidney(rng),
        "liver_data" => liver(rng, None),
        "referral_worksheet" => referral(rng),
        _ => return None,
    })
}

/// A FLOWSHEET with `pages` pages in total: the cover plus subforms.
pub fn long_flowsheet(rng: &mut ChaCha8Rng, pages: usize) -> DocContent {
    flowsheet(rng, pages.saturating_sub(1))
}

/// A DCD flowsheet of `pages` pages: repeated pre-op and vitals page
/// pairs for one donor, so half the pages need checkbox rasterization.
pub fn long_dcd_flowsheet(rng: &mut ChaCha8Rng, pages: usize) -> DocContent {
    let mut doc = dcd_flowsheet(rng, None);
    while doc.pages.len() < pages {
        let more = dcd_flowsheet(rng, None);
        doc.pages.extend(more.pages);
        doc.checkboxes.extend(more.checkboxes);
    }
    doc.pages.truncate(pages.max(1));
    for (i, p) in doc.pages.iter_mut().enumerate() {
        if let PageTruth::Form(r) = &mut p.truth {
            r.page = i;
        }
    }
    doc
}

/// Fixed example vitals table, minutes 0-20.
pub fn example_vitals_rows() -> Vec<VitalsSeriesRow> {
    let measured: [[f64; 6]; 6] = [
        [100.0, 170.0, 87.0, 115.0, 12.0, 88.0],
        [108.0, 191.0, 97.0, 128.0, 27.0, 70.0],
        [111.0, 203.0, 102.0, 136.0, 33.0, 38.0],
        [102.0, 117.0, 68.0, 84.0, 28.0, 0.0],
        [88.0, 96.0, 63.0, 74.0, 8.0, 0.0],
        [54.0, 72.0, 49.0, 57.0, 0.0, 0.0],
    ];
    let start = NaiveDate::from_ymd_opt(2022, 1, 1).and_then(|d| d.and_hms_opt(9, 47, 0)).expect("valid");
    (0..=20)
        .map(|m: i64| {
            let v: [Option<f64>; 6] = match m {
                0..=5 => measured[m as usize].map(Some),
                6..=13 => [Some(0.0); 6],
                _ => [None; 6],
            };
            let time = format!("{} EST", (start + Duration::minutes(m)).format("%Y-%m-%d %H:%M"));
            VitalsSeriesRow {
                minute: m,
                timestamp: crate::records::parse_timestamp(&time),
                time,
                hr: v[0],
                bp_systolic: v[1],
                bp_diastolic: v[2],
                map: v[3],
                rr: v[4],
                sao2: v[5],
            }
        })
        .collect()
}

/// Single-page DCD vitals document holding the fixed example table.
pub fn example_dcd_content() -> DocContent {
    let rows = example_vitals_rows();
    let blank = vec![false; rows.len()];
    let day = NaiveDate::from_ymd_opt(2022, 1, 1).expect("valid");
    let page = PageContent {
        form_id: "dcd_flowsheet".into(),
        page: vitals_page("DCDX001", "2022-01-01".into(), &rows, &blank),
        truth: PageTruth::Vitals(VitalsTable { rows, diagnostics: Vec::new() }),
    };
    DocContent {
        kind: "dcd_flowsheet".into(),
        pages: vec![page],
        donor_id: Some("DCDX001".into()),
        form_date: Some(day),
        created: day.and_hms_opt(12, 0, 0).expect("valid"),
        version_note: "example table".into(),
        checkboxes: Vec::new(),
    }
}
