var top1 = 1, top2;
let top3;

function alpha(p, q) {
  var a = 1;
  let b = 2, c = 3;
  const d = a + b;
  return a + b + c + d + p + q;
}

function beta() {
  for (var i = 0; i < 3; i++) {
    let j = i;
  }
  return 0;
}

function gamma() {}
