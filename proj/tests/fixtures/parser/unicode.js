// Ünïcödé comment ≈ with symbols
const ünïcode = "日本語 😀";
function ëmoji() { return "😀😀"; } const after = () => 1;
/* multi
   line ✓ comment */ function afterComment() {}
const x = { "ключ": function () {} };
