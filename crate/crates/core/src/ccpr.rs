//! Co-channel protection ratios and minimum C/N values for DVB-T and DVB-T2.
//!
//! The DVB-T block holds five sources per (modulation, code rate): the
//! stepped-power attack measurement (`M2`, Gaussian channel only), the
//! subjective-failure-point C/N measurement (`M1`), the Reimers and ETSI QEF
//! C/N figures, and the ITU-R co-channel protection ratios. The DVB-T2 block
//! holds the `M1` measurement and the `DTVP` simulation for two German
//! variants. Missing cells are absent rather than zero.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Bumped whenever an embedded value changes.
pub const TABLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Standard {
    DvbT,
    DvbT2,
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Standard::DvbT => "DVB-T",
            Standard::DvbT2 => "DVB-T2",
        })
    }
}

impl FromStr for Standard {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "DVB-T" | "DVBT" => Ok(Standard::DvbT),
            "DVB-T2" | "DVBT2" => Ok(Standard::DvbT2),
            _ => Err(Error::Config(format!("unknown standard '{s}'"))),
        }
    }
}

/// Constellation, ordered by modulation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 3] = [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64];

    pub fn order(self) -> u32 {
        match self {
            Modulation::Qpsk => 4,
            Modulation::Qam16 => 16,
            Modulation::Qam64 => 64,
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Qpsk => "QPSK",
            Modulation::Qam16 => "16QAM",
            Modulation::Qam64 => "64QAM",
        })
    }
}

impl FromStr for Modulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "").as_str() {
            "QPSK" => Ok(Modulation::Qpsk),
            "16QAM" | "QAM16" => Ok(Modulation::Qam16),
            "64QAM" | "QAM64" => Ok(Modulation::Qam64),
            _ => Err(Error::Config(format!("unknown modulation '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeRate {
    R1_2,
    R3_5,
    R2_3,
    R3_4,
    R5_6,
    R7_8,
}

impl CodeRate {
    /// Rates tabulated for DVB-T.
    pub const DVB_T: [CodeRate; 5] = [
        CodeRate::R1_2,
        CodeRate::R2_3,
        CodeRate::R3_4,
        CodeRate::R5_6,
        CodeRate::R7_8,
    ];

    pub fn as_fraction(self) -> f64 {
        match self {
            CodeRate::R1_2 => 1.0 / 2.0,
            CodeRate::R3_5 => 3.0 / 5.0,
            CodeRate::R2_3 => 2.0 / 3.0,
            CodeRate::R3_4 => 3.0 / 4.0,
            CodeRate::R5_6 => 5.0 / 6.0,
            CodeRate::R7_8 => 7.0 / 8.0,
        }
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeRate::R1_2 => "1/2",
            CodeRate::R3_5 => "3/5",
            CodeRate::R2_3 => "2/3",
            CodeRate::R3_4 => "3/4",
            CodeRate::R5_6 => "5/6",
            CodeRate::R7_8 => "7/8",
        })
    }
}

impl FromStr for CodeRate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/2" => Ok(CodeRate::R1_2),
            "3/5" => Ok(CodeRate::R3_5),
            "2/3" => Ok(CodeRate::R2_3),
            "3/4" => Ok(CodeRate::R3_4),
            "5/6" => Ok(CodeRate::R5_6),
            "7/8" => Ok(CodeRate::R7_8),
            _ => Err(Error::Config(format!("unknown code rate '{s}'"))),
        }
    }
}

/// DVB-T2 configurations in the table. Both are 64-QAM with LDPC 64800.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum T2Variant {
    /// 16K extended, 64-QAM, CR 3/5, GI 19/128, PP2.
    G2,
    /// 32K extended, 64-QAM, CR 2/3, GI 1/16, PP4.
    G8,
}

impl T2Variant {
    pub fn code_rate(self) -> CodeRate {
        match self {
            T2Variant::G2 => CodeRate::R3_5,
            T2Variant::G8 => CodeRate::R2_3,
        }
    }

    pub fn modulation(self) -> Modulation {
        Modulation::Qam64
    }
}

impl fmt::Display for T2Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            T2Variant::G2 => "G2",
            T2Variant::G8 => "G8",
        })
    }
}

impl FromStr for T2Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G2" => Ok(T2Variant::G2),
            "G8" => Ok(T2Variant::G8),
            _ => Err(Error::Config(format!("unknown DVB-T2 variant '{s}'"))),
        }
    }
}

/// A transmission mode: what a transmitter radiates.
///
/// Text form is `"DVB-T <modulation> <code rate>"` or `"DVB-T2 <variant>"`,
/// e.g. `"DVB-T 16QAM 2/3"` or `"DVB-T2 G8"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TransmissionMode {
    DvbT {
        modulation: Modulation,
        code_rate: CodeRate,
    },
    DvbT2(T2Variant),
}

impl TransmissionMode {
    pub const fn dvb_t(modulation: Modulation, code_rate: CodeRate) -> Self {
        TransmissionMode::DvbT {
            modulation,
            code_rate,
        }
    }

    pub fn standard(self) -> Standard {
        match self {
            TransmissionMode::DvbT { .. } => Standard::DvbT,
            TransmissionMode::DvbT2(_) => Standard::DvbT2,
        }
    }

    pub fn code_rate(self) -> CodeRate {
        match self {
            TransmissionMode::DvbT { code_rate, .. } => code_rate,
            TransmissionMode::DvbT2(v) => v.code_rate(),
        }
    }

    pub fn modulation(self) -> Modulation {
        match self {
            TransmissionMode::DvbT { modulation, .. } => modulation,
            TransmissionMode::DvbT2(v) => v.modulation(),
        }
    }

    /// Label used in the modulation column of the CSV export.
    fn modulation_label(self) -> String {
        match self {
            TransmissionMode::DvbT { modulation, .. } => modulation.to_string(),
            TransmissionMode::DvbT2(v) => v.to_string(),
        }
    }
}

impl fmt::Display for TransmissionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransmissionMode::DvbT {
                modulation,
                code_rate,
            } => {
                write!(f, "DVB-T {modulation} {code_rate}")
            }
            TransmissionMode::DvbT2(v) => write!(f, "DVB-T2 {v}"),
        }
    }
}

impl FromStr for TransmissionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            [std, m, cr] if std.parse::<Standard>()? == Standard::DvbT => Ok(TransmissionMode::DvbT {
                modulation: m.parse()?,
                code_rate: cr.parse()?,
            }),
            [std, v] if std.parse::<Standard>()? == Standard::DvbT2 => {
                Ok(TransmissionMode::DvbT2(v.parse()?))
            }
            _ => Err(Error::Config(format!(
                "cannot parse transmission mode '{s}' (expected e.g. \"DVB-T 16QAM 2/3\" or \"DVB-T2 G8\")"
            ))),
        }
    }
}

impl TryFrom<String> for TransmissionMode {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TransmissionMode> for String {
    fn from(m: TransmissionMode) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Channel {
    Gaussian,
    Ricean,
    Rayleigh,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Gaussian, Channel::Ricean, Channel::Rayleigh];
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Gaussian => "Gaussian",
            Channel::Ricean => "Ricean",
            Channel::Rayleigh => "Rayleigh",
        })
    }
}

impl FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" | "awgn" => Ok(Channel::Gaussian),
            "ricean" | "rice" | "rician" => Ok(Channel::Ricean),
            "rayleigh" => Ok(Channel::Rayleigh),
            _ => Err(Error::Config(format!("unknown channel '{s}'"))),
        }
    }
}

impl TryFrom<String> for Channel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Channel> for String {
    fn from(c: Channel) -> String {
        c.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Source {
    /// Minimum C/N measured at the subjective failure point.
    M1,
    /// Stepped-power CCPR measurement with a ten-second lock criterion.
    M2,
    Reimers,
    Etsi,
    Itu,
    /// Simulated DVB-T2 values.
    Dtvp,
}

impl Source {
    pub const ALL: [Source; 6] = [
        Source::M1,
        Source::M2,
        Source::Reimers,
        Source::Etsi,
        Source::Itu,
        Source::Dtvp,
    ];
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::M1 => "M1",
            Source::M2 => "M2",
            Source::Reimers => "Reimers",
            Source::Etsi => "ETSI",
            Source::Itu => "ITU",
            Source::Dtvp => "DTVP",
        })
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(Source::M1),
            "m2" => Ok(Source::M2),
            "reimers" | "reim" | "reim." => Ok(Source::Reimers),
            "etsi" => Ok(Source::Etsi),
            "itu" | "itu-r" => Ok(Source::Itu),
            "dtvp" => Ok(Source::Dtvp),
            _ => Err(Error::Config(format!("unknown CCPR source '{s}'"))),
        }
    }
}

impl TryFrom<String> for Source {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Source> for String {
    fn from(s: Source) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CcprKey {
    pub mode: TransmissionMode,
    pub channel: Channel,
    pub source: Source,
}

impl CcprKey {
    pub fn new(mode: TransmissionMode, channel: Channel, source: Source) -> Self {
        CcprKey {
            mode,
            channel,
            source,
        }
    }
}

impl fmt::Display for CcprKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {} / {}", self.mode, self.channel, self.source)
    }
}

/// A protection ratio in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CcprValue(pub f64);

impl CcprValue {
    pub fn db(self) -> f64 {
        self.0
    }
}

/// Marks a cell the table leaves blank.
const NA: f64 = f64::NAN;

/// One DVB-T table row. Column order:
/// Gauss M1 M2 Reim ETSI ITU | Rice M1 Reim ETSI ITU | Rayleigh M1 Reim ETSI ITU.
type DvbTRow = (Modulation, CodeRate, [f64; 13]);

#[rustfmt::skip]
const DVB_T_ROWS: [DvbTRow; 15] = {
    use CodeRate::*;
    use Modulation::*;
    [
        (Qpsk,  R1_2, [ 2.0,  2.5,  3.1,  3.5,  5.0,   2.8,  3.6,  4.1,  6.0,   4.1,  5.4,  5.9,  8.0]),
        (Qpsk,  R2_3, [ 3.8,  3.5,  4.9,  5.3,  7.0,   4.8,  5.7,  6.1,  8.0,   7.1,  8.4,  9.6, 11.0]),
        (Qpsk,  R3_4, [ 4.7,  5.0,  5.9,  6.3,   NA,   5.9,  6.8,  7.2,   NA,   9.1, 10.7, 12.4,   NA]),
        (Qpsk,  R5_6, [ 5.8,  6.0,  6.9,  7.3,   NA,   7.3,  8.0,  8.5,   NA,  12.0, 13.1, 15.6,   NA]),
        (Qpsk,  R7_8, [ 6.4,  7.0,  7.7,  7.9,   NA,   8.0,  8.7,  9.2,   NA,  13.9, 16.3, 17.5,   NA]),
        (Qam16, R1_2, [ 7.3,  8.0,  8.8,  9.3, 10.0,   8.1,  9.6,  9.8, 11.0,   9.4, 11.2, 11.8, 13.0]),
        (Qam16, R2_3, [ 9.6, 10.0, 11.1, 11.4, 13.0,  10.6, 11.6, 12.1, 14.0,  12.7, 14.2, 15.3, 16.0]),
        (Qam16, R3_4, [10.8, 11.0, 12.5, 12.6, 14.0,  12.0, 13.0, 13.4, 15.0,  14.7, 16.7, 18.1, 18.0]),
        (Qam16, R5_6, [12.1, 12.5, 13.5, 13.8,   NA,  13.4, 14.4, 14.8,   NA,  17.5, 19.3, 21.3,   NA]),
        (Qam16, R7_8, [12.8, 13.0, 13.9, 14.4,   NA,  14.3, 15.0, 15.7,   NA,  19.5, 22.8, 23.6,   NA]),
        (Qam64, R1_2, [11.5, 11.5, 14.4, 13.8, 16.0,  12.4, 14.7, 14.3, 17.0,  13.9, 16.0, 16.4, 19.0]),
        (Qam64, R2_3, [14.7, 15.0, 16.5, 16.7, 19.0,  15.5, 17.1, 17.3, 20.0,  17.4, 19.3, 20.3, 23.0]),
        (Qam64, R3_4, [16.2, 16.5, 18.0, 18.2, 20.0,  17.3, 18.6, 18.9, 21.0,  19.8, 21.7, 23.0, 25.0]),
        (Qam64, R5_6, [17.7, 18.5, 19.3, 19.4,   NA,  18.9, 20.0, 20.4,   NA,  22.5, 25.3, 26.2,   NA]),
        (Qam64, R7_8, [18.6, 19.5, 20.1, 20.2,   NA,  19.9, 21.0, 21.3,   NA,  24.7, 27.9, 28.6,   NA]),
    ]
};

fn cell(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

/// Column layout of [`DVB_T_ROWS`].
const DVB_T_COLUMNS: [(Channel, Source); 13] = [
    (Channel::Gaussian, Source::M1),
    (Channel::Gaussian, Source::M2),
    (Channel::Gaussian, Source::Reimers),
    (Channel::Gaussian, Source::Etsi),
    (Channel::Gaussian, Source::Itu),
    (Channel::Ricean, Source::M1),
    (Channel::Ricean, Source::Reimers),
    (Channel::Ricean, Source::Etsi),
    (Channel::Ricean, Source::Itu),
    (Channel::Rayleigh, Source::M1),
    (Channel::Rayleigh, Source::Reimers),
    (Channel::Rayleigh, Source::Etsi),
    (Channel::Rayleigh, Source::Itu),
];

/// DVB-T2 rows. Column order: Gauss M1 DTVP | Rice M1 DTVP | Rayleigh M1 DTVP.
#[rustfmt::skip]
const DVB_T2_ROWS: [(T2Variant, [f64; 6]); 2] = [
    (T2Variant::G2, [12.8, 14.8, 13.3, 15.1, 15.2, 16.9]),
    (T2Variant::G8, [14.1, 15.7, 14.7, 16.1, 16.8, 17.9]),
];

const DVB_T2_COLUMNS: [(Channel, Source); 6] = [
    (Channel::Gaussian, Source::M1),
    (Channel::Gaussian, Source::Dtvp),
    (Channel::Ricean, Source::M1),
    (Channel::Ricean, Source::Dtvp),
    (Channel::Rayleigh, Source::M1),
    (Channel::Rayleigh, Source::Dtvp),
];

/// Every populated cell of the embedded table, in table order.
pub fn entries() -> Vec<(CcprKey, CcprValue)> {
    let mut out = Vec::new();
    for (modulation, code_rate, cells) in DVB_T_ROWS.iter() {
        let mode = TransmissionMode::dvb_t(*modulation, *code_rate);
        for ((channel, source), cell_value) in DVB_T_COLUMNS.iter().zip(cells.iter()) {
            if let Some(v) = cell(*cell_value) {
                out.push((CcprKey::new(mode, *channel, *source), CcprValue(v)));
            }
        }
    }
    for (variant, cells) in DVB_T2_ROWS.iter() {
        let mode = TransmissionMode::DvbT2(*variant);
        for ((channel, source), v) in DVB_T2_COLUMNS.iter().zip(cells.iter()) {
            out.push((CcprKey::new(mode, *channel, *source), CcprValue(*v)));
        }
    }
    out
}

/// Exact table value, or `None` where the table has no number.
pub fn lookup(key: CcprKey) -> Option<CcprValue> {
    match key.mode {
        TransmissionMode::DvbT {
            modulation,
            code_rate,
        } => {
            let (_, _, cells) = DVB_T_ROWS
                .iter()
                .find(|(m, cr, _)| *m == modulation && *cr == code_rate)?;
            let col = DVB_T_COLUMNS
                .iter()
                .position(|c| *c == (key.channel, key.source))?;
            cell(cells[col]).map(CcprValue)
        }
        TransmissionMode::DvbT2(variant) => {
            let (_, cells) = DVB_T2_ROWS.iter().find(|(v, _)| *v == variant)?;
            let col = DVB_T2_COLUMNS
                .iter()
                .position(|c| *c == (key.channel, key.source))?;
            Some(CcprValue(cells[col]))
        }
    }
}

/// Like [`lookup`], but reports a missing cell as an error.
pub fn require(key: CcprKey) -> Result<CcprValue> {
    lookup(key).ok_or_else(|| Error::NoEntries(key.to_string()))
}

/// The populated entry with the smallest protection ratio. Ties go to the
/// lower code rate, then the lower modulation order.
pub fn most_robust_mode(
    standard: Standard,
    channel: Channel,
    source: Source,
) -> Result<(CcprKey, CcprValue)> {
    entries()
        .into_iter()
        .filter(|(k, _)| {
            k.mode.standard() == standard && k.channel == channel && k.source == source
        })
        .min_by(|(ka, va), (kb, vb)| {
            va.0.total_cmp(&vb.0)
                .then(ka.mode.code_rate().cmp(&kb.mode.code_rate()))
                .then(ka.mode.modulation().cmp(&kb.mode.modulation()))
        })
        .ok_or_else(|| Error::NoEntries(format!("{standard} / {channel} / {source}")))
}

pub const CSV_HEADER: &str = "standard,modulation,code_rate,channel,source,ccpr_db";

/// The whole table as CSV.
pub fn to_csv() -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for (k, v) in entries() {
        s.push_str(&format!(
            "{},{},{},{},{},{:.1}\n",
            k.mode.standard(),
            k.mode.modulation_label(),
            k.mode.code_rate(),
            k.channel,
            k.source,
            v.0
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dvbt(m: Modulation, cr: CodeRate, ch: Channel, src: Source) -> Option<f64> {
        lookup(CcprKey::new(TransmissionMode::dvb_t(m, cr), ch, src)).map(|v| v.0)
    }

    #[test]
    fn lookup_examples() {
        use CodeRate::*;
        use Modulation::*;
        assert_eq!(dvbt(Qam16, R2_3, Channel::Gaussian, Source::M2), Some(10.0));
        assert_eq!(dvbt(Qpsk, R1_2, Channel::Gaussian, Source::M2), Some(2.5));
        assert_eq!(dvbt(Qpsk, R3_4, Channel::Gaussian, Source::Itu), None);
        assert_eq!(
            lookup(CcprKey::new(
                TransmissionMode::DvbT2(T2Variant::G8),
                Channel::Gaussian,
                Source::M1
            )),
            Some(CcprValue(14.1))
        );
    }

    #[test]
    fn m2_exists_only_for_gaussian() {
        use CodeRate::*;
        use Modulation::*;
        assert_eq!(dvbt(Qam16, R2_3, Channel::Ricean, Source::M2), None);
        assert_eq!(dvbt(Qam16, R2_3, Channel::Rayleigh, Source::M2), None);
        let m2 = entries()
            .iter()
            .filter(|(k, _)| k.source == Source::M2)
            .count();
        assert_eq!(m2, 15);
    }

    #[test]
    fn dvb_t_modes_have_no_t2_sources_and_vice_versa() {
        assert_eq!(
            dvbt(
                Modulation::Qpsk,
                CodeRate::R1_2,
                Channel::Gaussian,
                Source::Dtvp
            ),
            None
        );
        assert_eq!(
            lookup(CcprKey::new(
                TransmissionMode::DvbT2(T2Variant::G2),
                Channel::Gaussian,
                Source::Etsi
            )),
            None
        );
        // 3/5 only exists as part of G2
        assert_eq!(
            dvbt(
                Modulation::Qam64,
                CodeRate::R3_5,
                Channel::Gaussian,
                Source::M1
            ),
            None
        );
    }

    #[test]
    fn entry_count_and_range() {
        // 15 rows x 13 columns minus 7 rows without ITU values in 3 channels, plus 2 x 6 for T2
        let all = entries();
        assert_eq!(all.len(), 15 * 13 - 7 * 3 + 12);
        for (k, v) in &all {
            assert!((2.0..=29.0).contains(&v.0), "{k}: {}", v.0);
        }
    }

    #[test]
    fn most_robust_examples() {
        let (k, v) = most_robust_mode(Standard::DvbT, Channel::Gaussian, Source::M2).unwrap();
        assert_eq!(
            k.mode,
            TransmissionMode::dvb_t(Modulation::Qpsk, CodeRate::R1_2)
        );
        assert_eq!(v.0, 2.5);
        let (k, v) = most_robust_mode(Standard::DvbT, Channel::Rayleigh, Source::M1).unwrap();
        assert_eq!(
            k.mode,
            TransmissionMode::dvb_t(Modulation::Qpsk, CodeRate::R1_2)
        );
        assert_eq!(v.0, 4.1);
        let (k, _) = most_robust_mode(Standard::DvbT2, Channel::Ricean, Source::Dtvp).unwrap();
        assert_eq!(k.mode, TransmissionMode::DvbT2(T2Variant::G2));
        assert!(most_robust_mode(Standard::DvbT, Channel::Gaussian, Source::Dtvp).is_err());
        assert!(most_robust_mode(Standard::DvbT, Channel::Ricean, Source::M2).is_err());
    }

    #[test]
    fn code_rate_monotone_within_rows() {
        for src in Source::ALL {
            for ch in Channel::ALL {
                for m in Modulation::ALL {
                    let vals: Vec<f64> = CodeRate::DVB_T
                        .iter()
                        .filter_map(|cr| dvbt(m, *cr, ch, src))
                        .collect();
                    assert!(
                        vals.windows(2).all(|w| w[0] <= w[1]),
                        "{m} {ch} {src}: {vals:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn modulation_monotone_within_code_rate() {
        for src in Source::ALL {
            for ch in Channel::ALL {
                for cr in CodeRate::DVB_T {
                    let vals: Vec<f64> = Modulation::ALL
                        .iter()
                        .filter_map(|m| dvbt(*m, cr, ch, src))
                        .collect();
                    assert!(
                        vals.windows(2).all(|w| w[0] <= w[1]),
                        "{cr} {ch} {src}: {vals:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn channel_ordering_for_every_cell() {
        for (k, v) in entries() {
            for worse in Channel::ALL.iter().filter(|c| **c > k.channel) {
                if let Some(w) = lookup(CcprKey {
                    channel: *worse,
                    ..k
                }) {
                    assert!(v.0 <= w.0, "{k}: {} > {} on {worse}", v.0, w.0);
                }
            }
        }
    }

    #[test]
    fn csv_export_shape() {
        let csv = to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), entries().len());
        assert_eq!(rows[0], "DVB-T,QPSK,1/2,Gaussian,M1,2.0");
        assert!(rows.contains(&"DVB-T2,G8,2/3,Gaussian,M1,14.1"));
        assert!(rows.contains(&"DVB-T,16QAM,2/3,Gaussian,ETSI,11.4"));
    }

    #[test]
    fn mode_text_round_trip() {
        for (k, _) in entries() {
            let s = k.mode.to_string();
            assert_eq!(s.parse::<TransmissionMode>().unwrap(), k.mode);
        }
        assert!("DVB-T 16QAM".parse::<TransmissionMode>().is_err());
        assert!("DVB-T2 G9".parse::<TransmissionMode>().is_err());
        assert_eq!(
            "dvb-t qam64 2/3".parse::<TransmissionMode>().unwrap(),
            TransmissionMode::dvb_t(Modulation::Qam64, CodeRate::R2_3)
        );
    }
}
