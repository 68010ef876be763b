var anon = function () {
  var inner = 0;
  return inner;
};
var named = function namedExpr(x) {
  let y = x;
  return y;
};
setTimeout(function () {}, 0);
(function iife() {
  var hidden = 1;
})();
