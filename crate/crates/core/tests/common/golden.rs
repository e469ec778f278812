//! Input sentences with the logical forms printed for them, copied with
//! their typesetting escapes, and the sentence generated from the first.

pub const STOOD_I: &str = "The woman stood in the house.";

pub const STOOD_C: &str = r"animate(@(skc2,t\_4,s\_2)),female(@(skc2,t\_4,s\_2)),
before(t\_4,invl(timestamp(2014,6,2,1,3,48),
timestamp(2014,6,2,1,3,48))),
location\_in([stands(@(skc2,t\_4,s\_2))],@(skc3,t\_4,s\_3)),
woman(@(skc2,t\_4,s\_2),[animate,definite,singular,...]),
house(@(skc3,t\_4,s\_3),[definite,singular,prep(in)]),
stands[@(skc2,t\_4,s\_2)],[past,...])).";

pub const STOOD_O: &str =
    "The woman stood in the house before Monday the 2nd of June 2014 at 10:33:48 AM.";

pub const PAIRS: [(&str, &str); 6] = [
    (STOOD_I, STOOD_C),
    (
        "Women stand.",
        r"all([skc2],woman(@(skc2,t\_3,s\_2),[female,plural,...])
=> stands(@(skc2,t\_3,s\_2),[general\_habitual,...])).",
    ),
    (
        "All women always read all documents.",
        r"all([skc81,skc82,t\_81],((woman(@(skc81,t\_81,s\_81),[...]) &
document(@(skc82,t\_81,s\_82),[...]))
=> reads(@(skc81,t\_81,s\_81),@(skc82,t\_81,s\_82),[...]))).",
    ),
    (
        "If all women did not see the car then all women did not see the driver.",
        r"all([skc81],((woman(@(skc81,t\_81,s\_81),[...]) &
car(@(skc82,t\_81,s\_82),[...])) =>
~sees(@(skc81,t\_81,s\_81),@(skc82,t\_81,s\_82)))) =>
all([skc81], ((woman(@(skc81,t\_81,s\_81),[...]) &
driver(@(skc84,t\_81,s\_84),[...])) =>
~sees(@(skc81,t\_81,s\_81),@(skc84,t\_81,s\_84),[...]))).",
    ),
    (
        "The woman did not read the document.",
        r"woman(@(skc81,t\_22,s\_81),[definite,...]),
document(@(skc07,t\_22,s\_07),[definite,...]),
~reads(@(skc81,t\_22,s\_81),@(skc07,t\_22,s\_07),[past,...]).",
    ),
    (
        "Andrew White is the Prime Minister.",
        r"Andrew\_White(@(skc6,t\_10,s\_6),[...]),
prime\_minister(@(skc7,t\_10,s\_7),[...]),
identical[@(skc6,t\_10,s\_6),@(skc7,t\_10,s\_7)].",
    ),
];

/// Sentences the grammar must take without complaint. The noun phrase
/// examples sit inside short carrier sentences.
pub const CORPUS: [&str; 23] = [
    "The boy slept on Monday.",
    "The woman in the car read the message on the sign.",
    "The woman gave the man the document.",
    "Who gave the document to the boy?",
    "What did the woman read?",
    "What did the boy do?",
    "When did she read it?",
    "What region is she in?",
    "Did anyone see the woman?",
    "Show merchant ship situation report on MR41_PAN-EAV",
    "Show commercial aircraft situation report on NAT57_FL310",
    "Michael said that the woman read the document.",
    "Michael told Kerry that the woman read the document.",
    "The old man from Blueland slept.",
    "The man and the woman and the boy slept.",
    "Several friendly men slept.",
    "The some ancient old man slept.",
    "The sick woman's house stood.",
    "Dale's car stood.",
    "The woman stood in the house.",
    "Women stand.",
    "All women always read all documents.",
    "Andrew White is the Prime Minister.",
];

pub const AMBIGUOUS: &str = "The woman in the car read the message on the sign.";
