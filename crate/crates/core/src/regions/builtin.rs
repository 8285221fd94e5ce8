//! Builtin systems in the text format.

pub(super) const THM1_TEMPLATE: &str =
    "Q; U0|Q; U1,U2|U0; V0|Q; V1,V2|V0; X1|U0,U1,U2; X2|V0,V1,V2; Y1,Y2,Z|X1,X2";
pub(super) const THM7_TEMPLATE: &str =
    "Q; U0,U1,U2|Q; V0,V1,V2|Q; X1|U0,U1,U2; X2|V0,V1,V2; Y1,Y2,Z|X1,X2";
pub(super) const DEGRADED_INDEP_TEMPLATE: &str =
    "Q; U0|Q; V0|Q; X1|U0; X2|V0; Y1|X1,X2; Y2|Y1; Z|Y2";
pub(super) const DEGRADED_JOINT_TEMPLATE: &str = "Q; U0,V0|Q; X1|U0; X2|V0; Y1|X1,X2; Y2|Y1; Z|Y2";
pub(super) const JOINT_TEMPLATE: &str = "Q; U0,V0|Q; X1|U0; X2|V0; Y1,Y2,Z|X1,X2";
pub(super) const MACWT_TEMPLATE: &str = "Q; U|Q; V|Q; X1|U; X2|V; Y,Z|X1,X2";
pub(super) const SWITCH_TEMPLATE: &str = "X1; X2; Y1,Y2,Z|X1,X2";

pub(super) const CONSTRAINT_20: &str =
    "0 <= I(U1,V1;Z|U0,V0) + I(U2,V2;Z|U0,V0) - I(U1,U2,V1,V2;Z|U0,V0) - I(U1;U2|U0) - I(V1;V2|V0)  # (20)";

pub(super) fn thm1() -> String {
    format!(
        "rates: R1, R2
template: {THM1_TEMPLATE}
R1 <= I(U0,U1;Y1|Q,V0,V1) - I(U0;Z|Q) - I(U1;Z|Q,U0,V0)  # (8)
R1 <= I(U0,U2;Y2|Q,V0,V2) - I(U0;Z|Q) - I(U2;Z|Q,U0,V0)  # (9)
R2 <= I(V0,V1;Y1|Q,U0,U1) - I(V0;Z|Q) - I(V1;Z|Q,U0,V0)  # (10)
R2 <= I(V0,V2;Y2|Q,U0,U2) - I(V0;Z|Q) - I(V2;Z|Q,U0,V0)  # (11)
R1 + R2 <= I(U0,U1,V0,V1;Y1|Q) - I(U0,U1,V0,V1;Z|Q)  # (12)
R1 + R2 <= I(U0,U2,V0,V2;Y2|Q) - I(U0,U2,V0,V2;Z|Q)  # (13)
R1 + R2 <= I(U0,U1;Y1|Q,V0,V1) + I(V0,V2;Y2|Q,U0,U2) - I(U0,V0;Z|Q) - I(U1;Z|Q,U0,V0) - I(V2;Z|Q,U0,V0)  # (14)
R1 + R2 <= I(V0,V1;Y1|Q,U0,U1) + I(U0,U2;Y2|Q,V0,V2) - I(U0,V0;Z|Q) - I(U2;Z|Q,U0,V0) - I(V1;Z|Q,U0,V0)  # (15)
{CONSTRAINT_20}
"
    )
}

pub(super) fn cor1() -> String {
    format!(
        "rates: R1, R2
template: {DEGRADED_INDEP_TEMPLATE}
R1 <= I(U0;Y2|V0,Q) - I(U0;Z|Q)  # (22a)
R2 <= I(V0;Y2|U0,Q) - I(V0;Z|Q)  # (22b)
R1 + R2 <= I(U0,V0;Y2|Q) - I(U0;Z|Q) - I(V0;Z|Q)  # (22c)
"
    )
}

pub(super) fn thm2() -> String {
    format!(
        "rates: R1, R2
template: {DEGRADED_JOINT_TEMPLATE}
R1 <= I(U0;Y2|Q) - I(U0;Z|Q)  # (25)
R2 <= I(V0;Y2|Q) - I(V0;Z|Q)  # (26)
R1 + R2 <= I(U0,V0;Y2|Q) - I(U0,V0;Z|Q)  # (27)
"
    )
}

/// Symbols `Y2` and `Z` stand for the state-augmented outputs of the switch.
pub(super) fn thm3() -> String {
    format!(
        "rates: R1, R2
template: {DEGRADED_INDEP_TEMPLATE}
R1 <= I(U0;Y2|V0,Q) - I(U0;Z|Q)  # (31)
R2 <= I(V0;Y2|U0,Q) - I(V0;Z|Q)  # (32)
R1 + R2 <= I(U0,V0;Y2|Q) - I(U0,V0;Z|Q)  # (33)
"
    )
}

pub(super) fn thm4() -> String {
    format!(
        "rates: R1, R2
template: {JOINT_TEMPLATE}
R1 <= I(U0;Y1,Y2|Q) - I(U0;Z|Q)  # (39)
R2 <= I(V0;Y1,Y2|Q) - I(V0;Z|Q)  # (40)
R1 + R2 <= I(U0,V0;Y1,Y2|Q) - I(U0,V0;Z|Q)  # (41)
"
    )
}

/// Branch `tau1 >= tau2`; every right-hand side is later scaled by `tau1 - tau2`.
pub(super) fn thm5_first() -> String {
    format!(
        "rates: R1, R2
template: {SWITCH_TEMPLATE}
R1 <= H(X1)  # (43a)
R2 <= 0  # (43b)
"
    )
}

/// Branch `tau2 >= tau1`; scaled by `tau2 - tau1`.
pub(super) fn thm5_second() -> String {
    format!(
        "rates: R1, R2
template: {SWITCH_TEMPLATE}
R1 <= 0  # (43a)
R2 <= H(X2)  # (43b)
"
    )
}

const THM7_RATES: &str = "rates: R1, R2, Rt1, Rt2, Rt1', Rt2', Rt1'', Rt2''";

fn secrecy_lines(full: bool) -> String {
    let mut s = String::from(
        "R1 + Rt1 <= H(U0|Z)  # (45)
R2 + Rt2 <= H(V0|Z)  # (46)
R1 + Rt1 + R2 + Rt2 <= H(U0,V0|Z)  # (47)
",
    );
    for j in 1..=2 {
        s += &format!("Rt{j}' <= H(U{j}|U0,V0,Z)  # (48) j={j}\n");
    }
    for j in 1..=2 {
        s += &format!("Rt{j}'' <= H(V{j}|U0,V0,Z)  # (49) j={j}\n");
    }
    let js: &[usize] = if full { &[1, 2] } else { &[1] };
    for &j in js {
        s += &format!("Rt1' + Rt{j}'' <= H(U1,V{j}|U0,V0,Z)  # (50) j={j}\n");
    }
    let js: &[usize] = if full { &[1, 2] } else { &[2] };
    for &j in js {
        s += &format!("Rt2' + Rt{j}'' <= H(U2,V{j}|U0,V0,Z)  # (51) j={j}\n");
    }
    if full {
        s += "Rt1' + Rt2' <= H(U1,U2|U0,V0,Z)  # (52)\n";
        s += "Rt1'' + Rt2'' <= H(V1,V2|U0,V0,Z)  # (53)\n";
        for j in 1..=2 {
            s += &format!("Rt1' + Rt2' + Rt{j}'' <= H(U1,U2,V{j}|U0,V0,Z)  # (54) j={j}\n");
        }
        for j in 1..=2 {
            s += &format!("Rt{j}' + Rt1'' + Rt2'' <= H(U{j},V1,V2|U0,V0,Z)  # (55) j={j}\n");
        }
        s += "Rt1' + Rt2' + Rt1'' + Rt2'' <= H(U1,U2,V1,V2|U0,V0,Z)  # (56)\n";
    }
    s
}

fn decoding_lines() -> String {
    let mut s = String::new();
    for j in 1..=2 {
        s += &format!("Rt1 + Rt{j}' >= H(U0,U{j}|V0,V{j},Y{j})  # (59) j={j}\n");
        s += &format!("Rt2 + Rt{j}'' >= H(V0,V{j}|U0,U{j},Y{j})  # (62) j={j}\n");
        s += &format!("Rt1 + Rt{j}' + Rt2 + Rt{j}'' >= H(U0,U{j},V0,V{j}|Y{j})  # (69) j={j}\n");
    }
    s
}

/// Decoding constraints that the region statement leaves out; used to check
/// the redundancy claims about them.
pub(super) fn thm7_omitted_decoding() -> String {
    let mut s = format!("{THM7_RATES}\n");
    for j in 1..=2 {
        s += &format!("Rt{j}' >= H(U{j}|U0,V0,V{j},Y{j})  # (58) j={j}\n");
        s += &format!("Rt{j}'' >= H(V{j}|U0,U{j},V0,Y{j})  # (60) j={j}\n");
        s += &format!("Rt{j}' + Rt{j}'' >= H(U{j},V{j}|U0,V0,Y{j})  # (61) j={j}\n");
        s += &format!("Rt2 + Rt{j}' >= H(U{j}|U0,V0,V{j},Y{j})  # (63) j={j}\n");
        s += &format!("Rt1 + Rt{j}'' >= H(V{j}|U0,U{j},V0,Y{j})  # (64) j={j}\n");
        s += &format!("Rt1 + Rt{j}' + Rt{j}'' >= H(U0,U{j},V{j}|V0,Y{j})  # (65) j={j}\n");
        s += &format!("Rt1 + Rt{j}' + Rt2 >= H(U0,U{j}|V0,V{j},Y{j})  # (66) j={j}\n");
        s += &format!("Rt1 + Rt{j}'' + Rt2 >= H(V0,V{j}|U0,U{j},Y{j})  # (67) j={j}\n");
        s += &format!("Rt{j}' + Rt2 + Rt{j}'' >= H(U{j},V0,V{j}|U0,Y{j})  # (68) j={j}\n");
    }
    s
}

pub(super) fn thm7_raw() -> String {
    format!(
        "{THM7_RATES}\ntemplate: {THM7_TEMPLATE}\n{}{}",
        secrecy_lines(true),
        decoding_lines()
    )
}

pub(super) fn thm7_reduced() -> String {
    format!(
        "{THM7_RATES}\ntemplate: {THM7_TEMPLATE}\n{}{}{CONSTRAINT_20}\n",
        secrecy_lines(false),
        decoding_lines()
    )
}

pub(super) fn thm8() -> String {
    format!(
        "rates: R1, R2, Rd1, Rd2
template: {MACWT_TEMPLATE}
R1 <= I(U;Y|Q,V) - I(U;Z|Q)  # (100)
R2 <= I(V;Y|Q,U) - I(V;Z|Q)  # (101)
R1 + R2 <= I(U,V;Y|Q) - I(U,V;Z|Q)  # (102)
Rd1 >= I(U;Z|Q) + I(X1;Z|Q,U,V)  # (103)
Rd2 >= I(V;Z|Q) + I(X2;Z|Q,U,V)  # (104)
Rd1 + Rd2 >= I(U,V;Z|Q) + I(X1,X2;Z|Q,U,V)  # (105)
"
    )
}

pub(super) fn appb_raw() -> String {
    format!(
        "rates: R1, R2, Rd1, Rd2, R11, R12, R21, R22
template: {MACWT_TEMPLATE}
R1 + R11 <= I(U;Y|Q,V)  # (112)
R2 + R21 <= I(V;Y|Q,U)  # (113)
R1 + R11 + R2 + R21 <= I(U,V;Y|Q)  # (114)
R11 >= I(U;Z|Q)  # (121)
R21 >= I(V;Z|Q)  # (122)
R11 + R21 >= I(U,V;Z|Q)  # (123)
R12 >= I(X1;Z|Q,U,V)  # (128)
R22 >= I(X2;Z|Q,U,V)  # (129)
R12 + R22 >= I(X1,X2;Z|Q,U,V)  # (130)
Rd1 = R11 + R12  # split 1
Rd2 = R21 + R22  # split 2
"
    )
}

pub(super) fn appc_raw() -> String {
    format!(
        "rates: R1, R2, Rt1, Rt2, T1, T2, S1, S2, R1', R1'', R2', R2''
template: {THM1_TEMPLATE}
R1' + R1'' <= T1 + T2 - I(U1;U2|U0)  # (137)
Rt1 + T1 <= I(U0,U1;Y1|Q,V0,V1)  # (138)
Rt2 + S1 <= I(V0,V1;Y1|Q,U0,U1)  # (139)
Rt1 + T1 + Rt2 + S1 <= I(U0,U1,V0,V1;Y1|Q)  # (140)
R2' + R2'' <= S1 + S2 - I(V1;V2|V0)  # (141)
Rt1 + T2 <= I(U0,U2;Y2|Q,V0,V2)  # (142)
Rt2 + S2 <= I(V0,V2;Y2|Q,U0,U2)  # (143)
Rt1 + T2 + Rt2 + S2 <= I(U0,U2,V0,V2;Y2|Q)  # (144)
Rt1 - R1 + Rt2 - R2 >= I(U0,V0;Z|Q)  # (160)
Rt1 - R1 >= I(U0;Z|Q)  # (161)
Rt2 - R2 >= I(V0;Z|Q)  # (162)
T1 + S1 >= I(U1,V1;Z|Q,U0,V0)  # (163)
T1 >= I(U1;Z|Q,U0,V0)  # (164)
S1 >= I(V1;Z|Q,U0,V0)  # (165)
T2 + S2 >= I(U2,V2;Z|Q,U0,V0)  # (166)
T2 >= I(U2;Z|Q,U0,V0)  # (167)
S2 >= I(V2;Z|Q,U0,V0)  # (168)
T1 + S1 + T2 + S2 - R1' - R1'' - R2' - R2'' <= I(U1,V1;Z|Q,U0,V0) + I(U2,V2;Z|Q,U0,V0) - I(U1,U2,V1,V2;Z|U0,V0)  # (169)
"
    )
}
