// Advisory first-word completion from the service's command heads.
// Free text is always allowed; this only suggests.

export function suggest(line: string, heads: string[]): string[] {
  const beforeCursor = line.trimStart();
  if (beforeCursor === "" || beforeCursor.includes(" ")) return [];
  const prefix = beforeCursor.toLowerCase();
  return heads.filter((head) => head.startsWith(prefix) && head !== prefix)
    .sort();
}

/** Tab completion: extend the line by the unambiguous shared prefix. */
export function complete(line: string, heads: string[]): string {
  const matches = suggest(line, heads);
  if (matches.length === 0) return line;
  if (matches.length === 1) return matches[0] + " ";
  let shared = matches[0];
  for (const match of matches.slice(1)) {
    let i = 0;
    while (i < shared.length && shared[i] === match[i]) i += 1;
    shared = shared.slice(0, i);
  }
  return shared.length > line.trimStart().length ? shared : line;
}
