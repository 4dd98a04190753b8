/**
 * CLI: `extract --manifest m.jsonl --out feat/ [--seed N] [--input-size N]`
 *      `annotate --manifest m.jsonl --out ann/ --credentials creds.json`
 *
 * credentials file: JSON {"endpoint": "...", "api_key": "..."}.
 */

import * as fs from 'fs';
import { extractFeatures } from './extract';
import { loadManifest } from './manifest';
import { fetchAnnotations } from './vision';

function parseFlags(argv: string[]): Record<string, string> {
  const flags: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith('--') || argv[i + 1] === undefined) {
      throw new Error(`bad argument ${argv[i]}`);
    }
    flags[argv[i].slice(2)] = argv[i + 1];
  }
  return flags;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  const flags = parseFlags(rest);
  if (command === 'extract') {
    const records = loadManifest(flags['manifest']);
    const summary = await extractFeatures(records, flags['out'], {
      seed: flags['seed'] ? parseInt(flags['seed'], 10) : undefined,
      inputSize: flags['input-size'] ? parseInt(flags['input-size'], 10) : undefined,
      skipExisting: flags['skip-existing'] === 'true',
    });
    console.log(
      `written ${summary.written.length}, skipped ${summary.skipped.length}, ` +
        `failed ${summary.failures.length}`,
    );
    summary.failures.forEach((f) => console.error(`  ${f.id}: ${f.error}`));
    return summary.failures.length > 0 ? 1 : 0;
  }
  if (command === 'annotate') {
    const records = loadManifest(flags['manifest']);
    const creds = JSON.parse(fs.readFileSync(flags['credentials'], 'utf-8'));
    const summary = await fetchAnnotations(records, flags['out'], {
      endpoint: creds.endpoint,
      apiKey: creds.api_key,
    });
    console.log(
      `written ${summary.written.length}, skipped ${summary.skipped.length}, ` +
        `failed ${summary.failures.length}, API calls ${summary.apiCalls}`,
    );
    return 0;
  }
  console.error('usage: cli.ts <extract|annotate> --manifest ... --out ...');
  return 2;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(`error: ${err.message}`);
    process.exit(1);
  },
);
