//! The order-fulfillment example shipped under `fixtures/`.

use crate::model::{parse_model, ProcessModel};
use crate::olc::{compose, CompositeOlc, ObjectLifeCycle, SyncSpec};
use crate::sequence::{parse_sd, SequenceDiagram};

pub const ORDER_OLC: &str = include_str!("../../../fixtures/order.olc.json");
pub const PRODUCT_OLC: &str = include_str!("../../../fixtures/product.olc.json");
pub const PAYMENT_OLC: &str = include_str!("../../../fixtures/payment.olc.json");
pub const SYNC: &str = include_str!("../../../fixtures/sync.json");
pub const FIG1_COMPOSITE: &str = include_str!("../../../fixtures/fig1-composite.json");
pub const FIG2_BASE_JSON: &str = include_str!("../../../fixtures/fig2-base.json");
pub const FIG2_BASE_BPMN: &str = include_str!("../../../fixtures/fig2-base.bpmn");
pub const FIG3_SD: &str = include_str!("../../../fixtures/fig3-sd.json");
pub const EMPTY_SD: &str = include_str!("../../../fixtures/empty-sd.json");
pub const FIG4_VARIANT_JSON: &str = include_str!("../../../fixtures/fig4-variant.json");
pub const FIG4_VARIANT_BPMN: &str = include_str!("../../../fixtures/fig4-variant.bpmn");

/// Id of the late-cancellation fragment in [`FIG3_SD`].
pub const LATE_CANCEL: &str = "late-cancel";

pub fn order() -> ObjectLifeCycle {
    ObjectLifeCycle::from_json(ORDER_OLC).expect("order fixture parses")
}

pub fn product() -> ObjectLifeCycle {
    ObjectLifeCycle::from_json(PRODUCT_OLC).expect("product fixture parses")
}

pub fn payment() -> ObjectLifeCycle {
    ObjectLifeCycle::from_json(PAYMENT_OLC).expect("payment fixture parses")
}

pub fn sync() -> SyncSpec {
    SyncSpec::from_json(SYNC).expect("sync fixture parses")
}

/// Order, product and payment composed with [`sync`].
pub fn fig1() -> CompositeOlc {
    compose(&[order(), product(), payment()], &sync())
        .expect("fig. 1 composes")
        .olc
}

pub fn fig2() -> ProcessModel {
    parse_model(FIG2_BASE_JSON).expect("fig. 2 fixture parses")
}

pub fn fig3() -> SequenceDiagram {
    parse_sd(FIG3_SD).expect("fig. 3 fixture parses")
}

pub fn empty_sd() -> SequenceDiagram {
    parse_sd(EMPTY_SD).expect("empty diagram fixture parses")
}

pub fn fig4() -> ProcessModel {
    parse_model(FIG4_VARIANT_JSON).expect("fig. 4 fixture parses")
}
