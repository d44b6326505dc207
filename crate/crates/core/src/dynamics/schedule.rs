//! Piecewise transverse-field profiles `h_x(t)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};

const CONTINUITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// `h(s) = h_end + (h_start - h_end) cos(π s / 2d)`.
    CosineRampDown,
    /// `h(s) = h_start + (h_end - h_start) sin(π s / 2d)`.
    SineRampUp,
    LinearRamp,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub duration: f64,
    pub field_start: f64,
    pub field_end: f64,
}

impl Segment {
    pub fn new(kind: SegmentKind, duration: f64, field_start: f64, field_end: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(invalid(
                "duration",
                format!("segment duration must be positive, got {duration}"),
            ));
        }
        if !field_start.is_finite() || !field_end.is_finite() {
            return Err(invalid("field", "segment fields must be finite"));
        }
        if kind == SegmentKind::Constant && field_start != field_end {
            return Err(invalid(
                "field",
                format!("constant segment has distinct endpoints {field_start} and {field_end}"),
            ));
        }
        Ok(Self {
            kind,
            duration,
            field_start,
            field_end,
        })
    }

    pub fn constant(duration: f64, field: f64) -> Result<Self> {
        Self::new(SegmentKind::Constant, duration, field, field)
    }

    /// Field at local time `s ∈ [0, duration]`.
    pub fn field_at(&self, s: f64) -> f64 {
        let x = s / self.duration;
        let (a, b) = (self.field_start, self.field_end);
        match self.kind {
            SegmentKind::CosineRampDown => b + (a - b) * (FRAC_PI_2 * x).cos(),
            SegmentKind::SineRampUp => a + (b - a) * (FRAC_PI_2 * x).sin(),
            SegmentKind::LinearRamp => a + (b - a) * x,
            SegmentKind::Constant => a,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.kind == SegmentKind::Constant
    }
}

/// An ordered list of field segments with continuous joins.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    segments: Vec<Segment>,
}

impl Schedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for pair in segments.windows(2) {
            let jump = (pair[0].field_end - pair[1].field_start).abs();
            if jump > CONTINUITY_TOLERANCE {
                return Err(invalid(
                    "schedule",
                    format!("field jumps by {jump:e} between segments"),
                ));
            }
        }
        Ok(Self { segments })
    }

    /// `h0 cos(πt/2T_a)` down to zero, an optional constant `h = 0` hold of
    /// length `t_int`, then `h0 sin(π(t - t_0)/2T_a)` back up.
    pub fn cosine_sine(h0: f64, ramp_time: f64, sense_time: f64) -> Result<Self> {
        Self::round_trip(
            SegmentKind::CosineRampDown,
            SegmentKind::SineRampUp,
            h0,
            ramp_time,
            sense_time,
        )
    }

    /// Linear ramps `h0 → 0 → h0` around an optional zero-field hold.
    pub fn linear(h0: f64, ramp_time: f64, sense_time: f64) -> Result<Self> {
        Self::round_trip(
            SegmentKind::LinearRamp,
            SegmentKind::LinearRamp,
            h0,
            ramp_time,
            sense_time,
        )
    }

    fn round_trip(
        down: SegmentKind,
        up: SegmentKind,
        h0: f64,
        ramp_time: f64,
        sense_time: f64,
    ) -> Result<Self> {
        if sense_time < 0.0 {
            return Err(invalid(
                "T_int",
                format!("sensing time must be nonnegative, got {sense_time}"),
            ));
        }
        let mut segments = vec![Segment::new(down, ramp_time, h0, 0.0)?];
        if sense_time > 0.0 {
            segments.push(Segment::constant(sense_time, 0.0)?);
        }
        segments.push(Segment::new(up, ramp_time, 0.0, h0)?);
        Self::new(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Field at absolute time `t`, clamped to the schedule's span.
    pub fn field_at(&self, t: f64) -> f64 {
        let mut start = 0.0;
        for seg in &self.segments {
            if t <= start + seg.duration {
                return seg.field_at((t - start).max(0.0));
            }
            start += seg.duration;
        }
        self.segments.last().map_or(0.0, |s| s.field_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_sine_shape() {
        let s = Schedule::cosine_sine(2.0, 3.0, 1.0).unwrap();
        assert_eq!(s.segments().len(), 3);
        assert!((s.total_duration() - 7.0).abs() < 1e-15);
        assert!((s.field_at(0.0) - 2.0).abs() < 1e-15);
        assert!((s.field_at(1.5) - 2.0 * (std::f64::consts::PI / 4.0).cos()).abs() < 1e-14);
        assert!(s.field_at(3.5).abs() < 1e-15);
        assert!((s.field_at(5.5) - 2.0 * (std::f64::consts::PI / 4.0).sin()).abs() < 1e-14);
        assert!((s.field_at(7.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_sense_time_drops_the_hold() {
        let s = Schedule::linear(1.0, 2.0, 0.0).unwrap();
        assert_eq!(s.segments().len(), 2);
        assert!((s.field_at(1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discontinuity_and_bad_durations_rejected() {
        let a = Segment::new(SegmentKind::LinearRamp, 1.0, 1.0, 0.5).unwrap();
        let b = Segment::constant(1.0, 0.0).unwrap();
        assert!(Schedule::new(vec![a, b]).is_err());
        assert!(Segment::new(SegmentKind::LinearRamp, 0.0, 1.0, 0.0).is_err());
        assert!(Segment::new(SegmentKind::Constant, 1.0, 1.0, 0.0).is_err());
        assert!(Schedule::cosine_sine(1.0, 1.0, -1.0).is_err());
    }
}
