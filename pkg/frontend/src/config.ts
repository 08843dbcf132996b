/** Base URL of the splforge service. Empty means same origin, which is
 * right when the service itself hosts the UI (`splforge serve --ui`).
 * Point it at e.g. 'http://127.0.0.1:8437' to develop against a server
 * running elsewhere, then rebuild. */
export const SERVICE_BASE = '';
