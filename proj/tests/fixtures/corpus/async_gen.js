async function load(url) {
  const res = await fetch(url);
  return res;
}
function* counter() {
  let n = 0;
  while (true) yield n++;
}
const run = async () => {
  const data = await load("/x");
  [1, 2].forEach(async function each(item) {
    let seen = item;
  });
  return data;
};
export default function () {
  var d;
}
