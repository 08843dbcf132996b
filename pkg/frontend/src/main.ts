import { ApiError, SplClient } from './api.js';
import { SERVICE_BASE } from './config.js';
import { Session } from './store.js';
import { renderTree } from './tree.js';

const client = new SplClient(SERVICE_BASE);

const el = (id: string) => document.getElementById(id) as HTMLElement;

function showBanner(kind: 'error' | 'conflict', text: string): void {
  const banner = el('banner');
  banner.className = `banner banner-${kind}`;
  banner.textContent = text;
  banner.hidden = false;
}

function hideBanner(): void {
  el('banner').hidden = true;
}

function download(filename: string, text: string): void {
  const link = document.createElement('a');
  link.href = URL.createObjectURL(new Blob([text], { type: 'text/plain' }));
  link.download = filename;
  link.click();
  URL.revokeObjectURL(link.href);
}

async function boot(): Promise<void> {
  let session: Session;
  try {
    const model = await client.model();
    session = new Session(client, model);
  } catch (err) {
    showBanner('error', err instanceof ApiError && err.status === 0
      ? 'The splforge service is not reachable. Start it with: splforge serve'
      : `Could not load the model: ${String(err)}`);
    return;
  }
  const model = session.model;
  el('model-name').textContent = `${model.name} (up to v${model.maxVersion})`;

  const exportButton = el('export') as HTMLButtonElement;
  const previewButton = el('preview') as HTMLButtonElement;
  const nameInput = el('product-name') as HTMLInputElement;
  nameInput.value = model.name.toLowerCase();

  let statusToken = 0;

  async function refreshStatus(): Promise<void> {
    const status = el('status');
    if (session.conflicted) {
      status.textContent = 'conflict';
      return;
    }
    const token = ++statusToken;
    try {
      const products = await client.count(session.closedSelection());
      if (token === statusToken) {
        status.textContent = session.total
          ? 'configuration complete'
          : `${products} product${products === 1 ? '' : 's'} still possible`;
      }
    } catch {
      if (token === statusToken) status.textContent = '';
    }
  }

  async function showConflict(): Promise<void> {
    const where = session.lastToggled ? ` at ${session.lastToggled}` : '';
    try {
      const report = await client.validate(session.decisions());
      const reasons = report.violations.map(v => v.message).join('; ');
      showBanner('conflict', `Conflicting decisions${where}. ${reasons}`);
    } catch {
      showBanner('conflict', `Conflicting decisions${where}.`);
    }
  }

  function render(): void {
    renderTree(el('tree'), model, {
      state: name => session.displayState(name),
      onToggle: (name, wanted) => session.toggle(name, wanted),
      highlight: session.conflicted ? session.lastToggled : null,
    });
    exportButton.disabled = session.conflicted;
    previewButton.disabled = !session.total;
    if (session.failure) {
      showBanner('error', session.failure);
    } else if (session.conflicted) {
      void showConflict();
    } else {
      hideBanner();
    }
    void refreshStatus();
  }

  exportButton.addEventListener('click', () => {
    download(`${nameInput.value || 'configuration'}.cfg`, session.exportText());
  });

  previewButton.addEventListener('click', async () => {
    const out = el('preview-out');
    out.textContent = 'deriving…';
    try {
      const product = await client.derive(session.closedSelection(), nameInput.value);
      out.textContent = product.text;
    } catch (err) {
      out.textContent = err instanceof ApiError && err.violations.length
        ? err.violations.map(v => v.message).join('\n')
        : String(err);
    }
  });

  session.onChange(render);
  render();
  await session.start();
}

void boot();
