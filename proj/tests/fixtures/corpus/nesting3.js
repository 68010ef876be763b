function outer() {
  var o1, o2;
  function middle() {
    let m = 1;
    const inner = function () {
      var i1, i2, i3;
      return i1;
    };
    return inner;
  }
  return middle;
}
