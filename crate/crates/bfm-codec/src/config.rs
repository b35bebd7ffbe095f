use crate::error::CodecError;

/// Bit widths used to quantize the Givens angles of one feedback report.
///
/// `b_phi` and `b_psi` are the widths of the phi and psi indices. The four
/// codebook presets of the compressed-beamforming standard are provided as
/// constants; arbitrary positive pairs are accepted as well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantizationConfig {
    pub b_phi: u8,
    pub b_psi: u8,
}

impl QuantizationConfig {
    /// Single-user feedback, codebook bit 0.
    pub const SU_COARSE: Self = Self { b_phi: 4, b_psi: 2 };
    /// Single-user feedback, codebook bit 1.
    pub const SU_FINE: Self = Self { b_phi: 6, b_psi: 4 };
    /// Multi-user feedback, codebook bit 0.
    pub const MU_COARSE: Self = Self { b_phi: 7, b_psi: 5 };
    /// Multi-user feedback, codebook bit 1.
    pub const MU_FINE: Self = Self { b_phi: 9, b_psi: 7 };

    pub fn new(b_phi: u8, b_psi: u8) -> Result<Self, CodecError> {
        if b_phi < 1 || b_psi < 1 {
            return Err(CodecError::InvalidBitWidth { b_phi, b_psi });
        }
        Ok(Self { b_phi, b_psi })
    }

    /// Largest representable phi index.
    pub fn max_phi_index(&self) -> u16 {
        (1u16 << self.b_phi) - 1
    }

    /// Largest representable psi index.
    pub fn max_psi_index(&self) -> u16 {
        (1u16 << self.b_psi) - 1
    }

    /// The preset selected by the feedback-type and codebook bits of a
    /// MIMO control field, if this config is one of the four presets.
    pub fn preset_bits(&self) -> Option<(bool, bool)> {
        match *self {
            Self::SU_COARSE => Some((false, false)),
            Self::SU_FINE => Some((false, true)),
            Self::MU_COARSE => Some((true, false)),
            Self::MU_FINE => Some((true, true)),
            _ => None,
        }
    }

    /// Inverse of [`preset_bits`](Self::preset_bits).
    pub fn from_preset_bits(mu: bool, codebook: bool) -> Self {
        match (mu, codebook) {
            (false, false) => Self::SU_COARSE,
            (false, true) => Self::SU_FINE,
            (true, false) => Self::MU_COARSE,
            (true, true) => Self::MU_FINE,
        }
    }
}

impl Default for QuantizationConfig {
    fn default() -> Self {
        Self::SU_FINE
    }
}
